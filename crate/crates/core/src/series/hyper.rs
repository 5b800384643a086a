use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::sum::{TailRule, TermSeries};
use super::{Enclosure, SeriesValue, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Parameters of `pFq(upper; lower; argument)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperParams {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
}

/// `Some(m)` when `q = -m` for a nonnegative integer `m`.
fn nonpositive_integer(q: &Rational) -> Option<u64> {
    if q.is_integer() && !q.is_positive() {
        let m = -q.to_integer();
        u64::try_from(m).ok()
    } else {
        None
    }
}

impl HyperParams {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Rational) -> Result<Self> {
        if let Some(bad) = lower.iter().find(|b| nonpositive_integer(b).is_some()) {
            return Err(Error::InvalidParams(format!(
                "lower parameter {bad} is a nonpositive integer"
            )));
        }
        Ok(HyperParams {
            upper,
            lower,
            argument,
        })
    }

    /// Index of the last nonzero term when an upper parameter is a nonpositive integer.
    fn terminates_at(&self) -> Option<u64> {
        self.upper.iter().filter_map(nonpositive_integer).min()
    }

    fn nonnegative_terms(&self) -> bool {
        !self.argument.is_negative()
            && self.upper.iter().all(|a| a.is_positive())
            && self.lower.iter().all(|b| b.is_positive())
    }

    /// `rho >= |t_{j+1}/t_j|` for every `j >= k`.
    ///
    /// Each upper parameter is paired with a lower one (the implicit `k!`
    /// supplies the extra lower `1`); once `a + k` and `b + k` are positive,
    /// `(a + j)/(b + j)` is monotone in `j` and bounded by `max(1, (a+k)/(b+k))`.
    /// Unpaired lower parameters contribute `1/(b + k)`.
    fn ratio_bound(&self, k: u64) -> Option<Rational> {
        let k = Rational::from_integer(BigInt::from(k));
        let mut lowers: Vec<Rational> = self.lower.clone();
        lowers.push(Rational::one());
        let mut rho = self.argument.abs();
        for (i, b) in lowers.iter().enumerate() {
            let bk = b + &k;
            if !bk.is_positive() {
                return None;
            }
            match self.upper.get(i) {
                Some(a) => {
                    let ak = a + &k;
                    if !ak.is_positive() {
                        return None;
                    }
                    let f = ak / &bk;
                    if f > Rational::one() {
                        rho *= f;
                    }
                }
                None => rho /= bk,
            }
        }
        Some(rho)
    }

    fn series(&self) -> Result<TermSeries<'_>> {
        let p = self.upper.len();
        let q = self.lower.len();
        let rule = match self.terminates_at() {
            Some(last) => TailRule::Terminating { last },
            None => {
                if p > q + 1 {
                    return Err(Error::Divergent(format!(
                        "{p}F{q} with more than q+1 upper parameters diverges"
                    )));
                }
                if p == q + 1 && self.argument.abs() >= Rational::one() {
                    return Err(Error::Divergent(format!(
                        "{p}F{q} needs |x| < 1, got x = {}",
                        self.argument
                    )));
                }
                TailRule::RatioBound(Box::new(move |k| self.ratio_bound(k)))
            }
        };
        // numerator and denominator are kept unreduced: every step multiplies
        // by small integers, so skipping the gcd is far cheaper
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let term = move |k: u64| {
            if k > 0 {
                let j = BigInt::from(k - 1);
                for a in &self.upper {
                    num *= a.numer() + &j * a.denom();
                    den *= a.denom();
                }
                for b in &self.lower {
                    num *= b.denom();
                    den *= b.numer() + &j * b.denom();
                }
                num *= self.argument.numer();
                den *= self.argument.denom() * BigInt::from(k);
                if den.is_negative() {
                    num = -std::mem::take(&mut num);
                    den = -std::mem::take(&mut den);
                }
            }
            Rational::new_raw(num.clone(), den.clone())
        };
        let series = TermSeries::new(term, rule);
        Ok(if self.nonnegative_terms() {
            series.nonnegative()
        } else {
            series
        })
    }
}

/// `pFq` as an exact enclosure whose radius is at most `2^-rel_bits` of the partial sum.
pub fn hypergeometric_enclosure(
    h: &HyperParams,
    rel_bits: u32,
    max_terms: usize,
) -> Result<Enclosure> {
    h.series()?.sum_to_relative(rel_bits, max_terms)
}

/// `pFq(upper; lower; x)` with a certified tail bound.
pub fn hypergeometric(h: &HyperParams, precision: u32, max_terms: usize) -> Result<SeriesValue> {
    Ok(hypergeometric_enclosure(h, precision + GUARD_BITS, max_terms)?.to_series_value(precision))
}
