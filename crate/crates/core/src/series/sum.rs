//! Partial sums of infinite series with rigorous geometric tail bounds.

use num_traits::{One, Signed, Zero};

use super::Enclosure;
use crate::error::{Error, Result};
use crate::exact::{pow2_neg, BigFloat, Rational};

/// Extra bits kept when rounding individual terms.
const ROUNDING_SLACK: u32 = 32;

/// How to bound the ratio of consecutive terms beyond a given index.
pub(crate) enum TailRule<'a> {
    /// `|t_{k+1} / t_k|` is nonincreasing and the terms are nonzero for all
    /// `k >= from`, so the first ratio past the cut bounds all later ones.
    MonotoneFrom(u64),
    /// `bound(k)` returns `rho` with `|t_{j+1} / t_j| <= rho` for every `j >= k`,
    /// or `None` while no such bound is known.
    RatioBound(Box<dyn Fn(u64) -> Option<Rational> + 'a>),
    /// All terms past `last` vanish.
    Terminating { last: u64 },
}

/// Sequential term source; `term(k)` is called for `k = 0, 1, 2, ...` in order.
pub(crate) struct TermSeries<'a> {
    term: Box<dyn FnMut(u64) -> Rational + 'a>,
    rule: TailRule<'a>,
    terms: Vec<Rational>,
    nonnegative: bool,
}

impl<'a> TermSeries<'a> {
    pub(crate) fn new(term: impl FnMut(u64) -> Rational + 'a, rule: TailRule<'a>) -> Self {
        TermSeries {
            term: Box::new(term),
            rule,
            terms: Vec::new(),
            nonnegative: false,
        }
    }

    /// Declares every term nonnegative, which halves the enclosure width.
    pub(crate) fn nonnegative(mut self) -> Self {
        self.nonnegative = true;
        self
    }

    fn term(&mut self, k: u64) -> &Rational {
        while self.terms.len() as u64 <= k {
            let next = (self.term)(self.terms.len() as u64);
            self.terms.push(next);
        }
        &self.terms[k as usize]
    }

    /// Upper bound on `sum_{j > cut} |t_j|`, if one is available yet.
    pub(crate) fn tail_after(&mut self, cut: u64) -> Option<Rational> {
        let next = cut + 1;
        match &self.rule {
            TailRule::Terminating { last } => {
                if cut >= *last {
                    Some(Rational::zero())
                } else {
                    None
                }
            }
            TailRule::MonotoneFrom(from) => {
                if next < *from {
                    return None;
                }
                let t_next = abs_lower(self.term(next));
                if t_next.is_zero() {
                    return None;
                }
                let t_after = abs_upper(self.term(next + 1));
                let rho = t_after / &t_next;
                geometric_tail(&abs_upper(self.term(next)), &rho)
            }
            TailRule::RatioBound(bound) => {
                let rho = bound(next)?;
                let t_next = abs_upper(self.term(next));
                if t_next.is_zero() {
                    // a zero term with a finite ratio bound forces every later term to vanish
                    return Some(Rational::zero());
                }
                geometric_tail(&t_next, &rho)
            }
        }
    }

    /// Partial sum through index `cut` together with its tail bound.
    #[cfg(test)]
    pub(crate) fn partial(&mut self, cut: u64) -> (Rational, Option<Rational>) {
        let mut sum = Rational::zero();
        for k in 0..=cut {
            sum += self.term(k).clone();
        }
        let tail = self.tail_after(cut);
        (sum, tail)
    }

    /// Sums until the tail bound drops below `2^-rel_bits` times the partial
    /// sum (or `2^-rel_bits` absolutely while the partial sum is zero).
    ///
    /// Terms are rounded to `rel_bits + ROUNDING_SLACK` significant bits
    /// before accumulation so the running sum stays dyadic; the accumulated
    /// rounding error is added to the radius.
    pub(crate) fn sum_to_relative(&mut self, rel_bits: u32, max_terms: usize) -> Result<Enclosure> {
        let eps = pow2_neg(rel_bits);
        let bits = rel_bits + ROUNDING_SLACK;
        let unit = pow2_neg(bits - 1);
        let mut sum = Rational::zero();
        let mut rounding = Rational::zero();
        for cut in 0..max_terms as u64 {
            let exact = self.term(cut);
            let rounded = BigFloat::from_rational(exact, bits).to_rational();
            if &rounded != exact {
                rounding += rounded.abs() * &unit;
            }
            sum += rounded;
            if let Some(tail) = self.tail_after(cut) {
                let scale = if sum.is_zero() {
                    Rational::one()
                } else {
                    sum.abs()
                };
                if tail <= &eps * scale {
                    debug_assert!(!self.nonnegative || self.terms_nonnegative(cut));
                    let enc =
                        Enclosure::from_partial(sum, tail, cut as usize + 1, self.nonnegative);
                    return Ok(Enclosure::new(
                        enc.mid().clone(),
                        enc.radius() + rounding,
                        enc.terms_used(),
                    ));
                }
            }
        }
        Err(Error::BudgetExhausted { max_terms })
    }

    fn terms_nonnegative(&self, cut: u64) -> bool {
        self.terms[..=cut as usize].iter().all(|t| !t.is_negative())
    }
}

/// Bits kept by [`abs_upper`] and [`abs_lower`].
const BOUND_BITS: u32 = 64;

/// A short dyadic `u >= |x|`, so tail arithmetic never touches huge fractions.
fn abs_upper(x: &Rational) -> Rational {
    let r = BigFloat::from_rational(x, BOUND_BITS).to_rational().abs();
    &r + &r * pow2_neg(BOUND_BITS - 1)
}

/// A short dyadic `l <= |x|`.
fn abs_lower(x: &Rational) -> Rational {
    let r = BigFloat::from_rational(x, BOUND_BITS).to_rational().abs();
    &r - &r * pow2_neg(BOUND_BITS - 1)
}

/// `t / (1 - rho)` when `rho < 1`.
fn geometric_tail(t: &Rational, rho: &Rational) -> Option<Rational> {
    if rho >= &Rational::one() {
        return None;
    }
    Some(t / (Rational::one() - rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, rat, ratio};
    use num_bigint::BigInt;

    fn exp_series(x: Rational) -> TermSeries<'static> {
        let x2 = x.clone();
        TermSeries::new(
            move |k| crate::exact::rational_pow(&x, k) / Rational::from_integer(factorial(k)),
            TailRule::RatioBound(Box::new(move |k| {
                Some(x2.abs() / Rational::from_integer(BigInt::from(k + 1)))
            })),
        )
    }

    #[test]
    fn exp_one_brackets_e() {
        let enc = exp_series(rat(1)).sum_to_relative(100, 500).unwrap();
        // e lies in (2.718281828459045, 2.718281828459046)
        let lo = ratio(2_718_281_828_459_045, 1_000_000_000_000_000);
        let hi = ratio(2_718_281_828_459_046, 1_000_000_000_000_000);
        assert!(enc.lower() > lo && enc.upper() < hi);
        assert!(enc.radius() <= &(pow2_neg(100) * rat(3)));
    }

    #[test]
    fn tail_bound_never_increases() {
        let mut series = exp_series(ratio(5, 2));
        let mut last: Option<Rational> = None;
        for cut in 0..60 {
            let (_, tail) = series.partial(cut);
            if let Some(t) = tail {
                if let Some(prev) = &last {
                    assert!(&t <= prev, "tail grew at cut {cut}");
                }
                last = Some(t);
            }
        }
        assert!(last.is_some());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut series = exp_series(rat(50));
        assert!(matches!(
            series.sum_to_relative(200, 10),
            Err(Error::BudgetExhausted { max_terms: 10 })
        ));
    }

    #[test]
    fn terminating_series_is_exact() {
        let mut series = TermSeries::new(
            |k| if k <= 3 { rat(k as i64 + 1) } else { rat(0) },
            TailRule::Terminating { last: 3 },
        );
        let enc = series.sum_to_relative(64, 100).unwrap();
        assert_eq!(enc.mid(), &rat(10));
        assert!(enc.radius().is_zero());
    }
}
