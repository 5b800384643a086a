//! Hypergeometric generating functions `G(lambda) = sum_n [B(n)/(n!)^t] lambda^n/n!`
//! for sequences that grow too fast to have a convergent egf.
//!
//! Two families are covered:
//!
//! * `(3,2)` with `t = 1`:
//!   `G = 1/e sum_k 1/(k+2)! 2F1(k+1, k+2; 1; lambda)`, radius `1`;
//! * `(2r,r)` with `t = r - 1`:
//!   `G = 1/e sum_m 1/(m+r)! rF_{r-1}((m+1)/r, ..., (m+r)/r; 1, ..., 1; r^r lambda)`,
//!   radius `r^-r`.
//!
//! Both double sums come from the Dobinski series with `k` starting at `s`,
//! which at `n = 0` gives `1/e sum_{k>=s} 1/k!` rather than the conventional
//! `B(0) = 1`. The constant `1/e sum_{i<s} 1/i!` is added back so that
//! `G(0) = 1`.
//!
//! For every `n >= 1` the coefficient of `lambda^n` in the double sum is
//! exactly `B(n)/(n!)^{t+1}`, which is what [`HgfMode::Polynomial`] checks.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dobinski::{exp_neg_enclosure, DEFAULT_MAX_TERMS};
use super::hyper::{hypergeometric_enclosure, HyperParams};
use super::{Enclosure, SeriesValue, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{factorial, pow2_neg, rat, rational_pow, BigFloat, Rational};
use crate::stirling::{bell_number, Params};

/// Sequences with a known hgf double-sum representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgfFamily {
    /// `B_{3,2}`.
    ThreeTwo,
    /// `B_{2r,r}`, carrying `r`.
    Diagonal(u32),
}

impl HgfFamily {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        match (r, s) {
            (3, 2) => Ok(HgfFamily::ThreeTwo),
            (r, s) if s >= 1 && r == 2 * s => Ok(HgfFamily::Diagonal(s)),
            _ => Err(Error::InvalidParams(format!(
                "no hgf representation for ({r},{s}); supported: (3,2) and (2r,r)"
            ))),
        }
    }

    pub fn params(&self) -> Params {
        match self {
            HgfFamily::ThreeTwo => Params::new(3, 2).expect("valid"),
            HgfFamily::Diagonal(r) => Params::new(2 * r, *r).expect("valid"),
        }
    }

    /// The exponent `t` in `(n!)^t`.
    pub fn t(&self) -> u32 {
        match self {
            HgfFamily::ThreeTwo => 1,
            HgfFamily::Diagonal(r) => r - 1,
        }
    }

    /// Radius of convergence in `lambda`.
    pub fn radius(&self) -> Rational {
        match self {
            HgfFamily::ThreeTwo => Rational::one(),
            HgfFamily::Diagonal(r) => rational_pow(&rat(*r as i64), *r as u64).recip(),
        }
    }

    /// Offset `m` in the outer `1/(k+m)!`; equals `s`.
    fn shift(&self) -> u64 {
        self.params().s() as u64
    }

    fn inner(&self, k: u64, lambda: &Rational) -> HyperParams {
        match self {
            HgfFamily::ThreeTwo => HyperParams {
                upper: vec![rat(k as i64 + 1), rat(k as i64 + 2)],
                lower: vec![rat(1)],
                argument: lambda.clone(),
            },
            HgfFamily::Diagonal(r) => diagonal_inner(*r, k, lambda),
        }
    }

    /// `(C, Q, a)` with `|F_k(lambda)| <= C Q^{k+a}` for every `k`.
    ///
    /// `(3,2)`: with rational `nu >= sqrt|lambda|`, `C(n+k, n) <= nu^-n (1-nu)^{-(k+1)}`
    /// applied to both Pochhammer ratios gives `F_k <= (1-nu)^{-(2k+3)}`.
    ///
    /// `(2r,r)`: with `mu = r^r |lambda|` and `nu^r >= sqrt(mu)`,
    /// `(k+rn)!/(k!(rn)!) <= nu^{-rn} (1-nu)^{-(k+1)}` and `(rn)!/(n!)^r <= r^{rn}`
    /// give `F_k <= (1-nu)^{-(k+1)} / (1 - mu/nu^r)`.
    fn envelope(&self, lambda: &Rational) -> Result<(Rational, Rational, u64)> {
        let x = lambda.abs();
        if x >= self.radius() {
            return Err(Error::Divergent(format!(
                "lambda = {lambda} is outside the radius {}",
                self.radius()
            )));
        }
        match self {
            HgfFamily::ThreeTwo => {
                let nu = root_ceil(&x, 2);
                let q = (Rational::one() - &nu).pow(-2);
                Ok((Rational::one(), q, 2))
            }
            HgfFamily::Diagonal(r) => {
                let mu = rational_pow(&rat(*r as i64), *r as u64) * &x;
                let nu = root_ceil(&mu, 2 * r);
                let omega = &mu / rational_pow(&nu, *r as u64);
                if nu >= Rational::one() || omega >= Rational::one() {
                    return Err(Error::Divergent(format!(
                        "lambda = {lambda} too close to the radius"
                    )));
                }
                let c = (Rational::one() - omega).recip();
                let q = (Rational::one() - &nu).recip();
                Ok((c, q, 1))
            }
        }
    }
}

impl fmt::Display for HgfFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        write!(f, "G_{{{},{}}}", p.r(), p.s())
    }
}

/// `rF_{r-1}((k+1)/r, ..., (k+r)/r; 1, ..., 1; r^r lambda)`.
fn diagonal_inner(r: u32, k: u64, lambda: &Rational) -> HyperParams {
    let rr = rat(r as i64);
    HyperParams {
        upper: (1..=r as u64).map(|i| rat((k + i) as i64) / &rr).collect(),
        lower: vec![rat(1); r as usize - 1],
        argument: rational_pow(&rr, r as u64) * lambda,
    }
}

/// A rational `nu` in `(0, 1]`-ish with `nu^index >= x`, within about `2^-24` of the root.
fn root_ceil(x: &Rational, index: u32) -> Rational {
    const BITS: u32 = 24;
    let scaled = x * Rational::from_integer(BigInt::one() << (BITS * index) as usize);
    let floor = scaled.floor().to_integer();
    let root = floor.nth_root(index) + BigInt::one();
    Rational::new(root, BigInt::one() << BITS as usize)
}

/// How the double sum and the direct sum are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgfMode {
    /// Inner series truncated at `lambda^N`, so both sides are the same
    /// degree-`N` polynomial up to the outer `k`-tail.
    Polynomial,
    /// Full analytic `G(lambda)` against the `N`-term direct sum; the direct
    /// side carries a Cauchy bound for its omitted coefficients.
    Full,
}

/// Outcome of comparing the double-sum form against the direct sum.
#[derive(Clone, Debug)]
pub struct HgfReport {
    pub family: HgfFamily,
    pub lambda: Rational,
    pub n_max: u32,
    pub mode: HgfMode,
    pub double_sum: SeriesValue,
    pub direct_sum: SeriesValue,
    pub difference: BigFloat,
    pub combined_bound: BigFloat,
    pub outer_terms: usize,
    pub agree: bool,
}

/// Outer sum `scale sum_k u_k`, `u_k = F_k / (k+m)!`, with `|F_k| <= C Q^{k+a}`.
struct OuterSum<'a> {
    scale: Rational,
    shift: u64,
    inner: Box<dyn Fn(u64) -> HyperParams + 'a>,
    envelope: (Rational, Rational, u64),
}

impl OuterSum<'_> {
    /// Bound on `sum_{k > cut} C Q^{k+a}/(k+m)!`, once `Q/(j+1) < 1`.
    fn tail_after(&self, cut: u64) -> Option<Rational> {
        let (c, q, a) = &self.envelope;
        let j = cut + 1 + self.shift;
        let rho = q / rat(j as i64 + 1);
        if rho >= Rational::one() {
            return None;
        }
        let first = c * rational_pow(q, cut + 1 + a) / Rational::from_integer(factorial(j));
        Some(first / (Rational::one() - rho))
    }

    fn sum(&self, truncate: Option<u32>, rel_bits: u32) -> Result<Enclosure> {
        let eps = pow2_neg(rel_bits);
        let mut acc = Enclosure::exact(Rational::zero());
        let mut last = Rational::zero();
        for k in 0..DEFAULT_MAX_TERMS as u64 {
            let h = (self.inner)(k);
            let f = match truncate {
                Some(order) => Enclosure::exact(hyper_partial(&h, order)),
                None => {
                    // later terms are small next to the running sum and need fewer bits
                    let drop = magnitude_gap(acc.mid(), &last);
                    let bits = rel_bits.saturating_sub(drop).max(24) + 8;
                    hypergeometric_enclosure(&h, bits, DEFAULT_MAX_TERMS)?
                }
            };
            let weight = Rational::new(BigInt::one(), factorial(k + self.shift));
            let term = f.scale(&weight);
            last = term.mid().abs();
            acc = acc.add(&term);
            if let Some(tail) = self.tail_after(k) {
                let scale = if acc.mid().is_zero() {
                    Rational::one()
                } else {
                    acc.mid().abs()
                };
                if tail <= &eps * scale {
                    let closed = acc.add(&Enclosure::new(Rational::zero(), tail, 0));
                    return Ok(Enclosure::new(
                        closed.mid().clone(),
                        closed.radius().clone(),
                        k as usize + 1,
                    )
                    .scale(&self.scale));
                }
            }
        }
        Err(Error::BudgetExhausted {
            max_terms: DEFAULT_MAX_TERMS,
        })
    }
}

/// Roughly `log2(|big| / |small|)`, floored at zero; zero when either vanishes.
fn magnitude_gap(big: &Rational, small: &Rational) -> u32 {
    if big.is_zero() || small.is_zero() {
        return 0;
    }
    let num = (big.numer() * small.denom()).bits() as i64;
    let den = (big.denom() * small.numer()).bits() as i64;
    (num - den - 1).max(0) as u32
}

/// First `order + 1` terms of a `pFq` series, exactly.
fn hyper_partial(h: &HyperParams, order: u32) -> Rational {
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for n in 0..order as i64 {
        let nr = rat(n);
        for a in &h.upper {
            term *= a + &nr;
        }
        for b in &h.lower {
            term /= b + &nr;
        }
        term = term * &h.argument / rat(n + 1);
        sum += &term;
    }
    sum
}

fn derived_outer(family: HgfFamily, lambda: &Rational) -> Result<OuterSum<'_>> {
    Ok(OuterSum {
        scale: Rational::one(),
        shift: family.shift(),
        inner: Box::new(move |k| family.inner(k, lambda)),
        envelope: family.envelope(lambda)?,
    })
}

/// `sum_{i<m} 1/i!`: the part of `e` the outer sum skips.
fn skipped_head(m: u64) -> Rational {
    (0..m)
        .map(|i| Rational::new(BigInt::one(), factorial(i)))
        .sum()
}

/// `G(lambda)` from the double sum, with the `B(0) = 1` constant restored.
fn g_double(
    family: HgfFamily,
    lambda: &Rational,
    truncate: Option<u32>,
    rel_bits: u32,
) -> Result<Enclosure> {
    let outer = derived_outer(family, lambda)?.sum(truncate, rel_bits)?;
    let s = outer.add(&Enclosure::exact(skipped_head(family.shift())));
    let terms = s.terms_used();
    let g = exp_neg_enclosure(&Rational::one(), rel_bits)?.mul(&s);
    Ok(Enclosure::new(g.mid().clone(), g.radius().clone(), terms))
}

/// `sum_{n=0..N} B(n)/(n!)^{t+1} lambda^n`, exactly.
fn g_direct(family: HgfFamily, lambda: &Rational, n_max: u32) -> Result<Rational> {
    let p = family.params();
    let t = family.t() as usize + 1;
    let mut acc = Rational::zero();
    for n in 0..=n_max {
        let denom = num_traits::pow(factorial(n as u64), t);
        acc += Rational::new(bell_number(p, n)?, denom) * rational_pow(lambda, n as u64);
    }
    Ok(acc)
}

pub fn hgf_radius(r: u32, s: u32) -> Result<Rational> {
    Ok(HgfFamily::new(r, s)?.radius())
}

/// One fifth of the radius of convergence.
pub fn hgf_default_lambda(r: u32, s: u32) -> Result<Rational> {
    Ok(hgf_radius(r, s)? / rat(5))
}

/// Compares the double-sum form of `G_{r,s}(lambda)` with the direct sum of
/// its first `n_max + 1` coefficients.
pub fn hgf_compare(
    r: u32,
    s: u32,
    lambda: &Rational,
    n_max: u32,
    mode: HgfMode,
    precision: u32,
) -> Result<HgfReport> {
    let family = HgfFamily::new(r, s)?;
    let rel_bits = precision + GUARD_BITS;
    let truncate = match mode {
        HgfMode::Polynomial => Some(n_max),
        HgfMode::Full => None,
    };
    let double = g_double(family, lambda, truncate, rel_bits)?;
    let direct_mid = g_direct(family, lambda, n_max)?;
    let direct_radius = match mode {
        HgfMode::Polynomial => Rational::zero(),
        HgfMode::Full => cauchy_tail(family, lambda, n_max, rel_bits)?,
    };
    let direct = Enclosure::new(direct_mid, direct_radius, n_max as usize + 1);
    let diff = (double.mid() - direct.mid()).abs();
    let bound = double.radius() + direct.radius();
    Ok(HgfReport {
        family,
        lambda: lambda.clone(),
        n_max,
        mode,
        double_sum: double.to_series_value(precision),
        direct_sum: direct.to_series_value(precision),
        difference: BigFloat::from_rational(&diff, precision),
        combined_bound: BigFloat::from_rational(&bound, precision),
        outer_terms: double.terms_used(),
        agree: diff <= bound,
    })
}

/// Bound on `sum_{n > N} c_n |lambda|^n` from `c_n <= G(rho)/rho^n`, valid
/// because every coefficient is nonnegative.
fn cauchy_tail(
    family: HgfFamily,
    lambda: &Rational,
    n_max: u32,
    rel_bits: u32,
) -> Result<Rational> {
    let x = lambda.abs();
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    let radius = family.radius();
    let mut candidates = vec![&x * rat(2), &radius / rat(2)];
    candidates.retain(|rho| rho > &x && rho < &radius);
    let mut best: Option<Rational> = None;
    for rho in candidates {
        let g_rho = g_double(family, &rho, None, rel_bits.min(32))?.upper();
        let ratio = &x / &rho;
        let bound = g_rho * rational_pow(&ratio, n_max as u64 + 1) / (Rational::one() - ratio);
        if best.as_ref().is_none_or(|b| &bound < b) {
            best = Some(bound);
        }
    }
    best.ok_or_else(|| Error::Divergent(format!("no Cauchy radius between {x} and {radius}")))
}

/// Polynomial-mode comparison: true iff the double sum and the direct sum
/// agree within their combined bounds.
pub fn hgf_check(r: u32, s: u32, lambda: &Rational, n_max: u32, precision: u32) -> Result<bool> {
    Ok(hgf_compare(r, s, lambda, n_max, HgfMode::Polynomial, precision)?.agree)
}

/// Variant double sums next to the derived form they are meant to equal,
/// both without the `B(0)` correction.
///
/// Returns `(label, variant, derived)` triples. For `(3,2)` the variant only
/// swaps the upper parameters and agrees. For `(4,2)` and `(2r,r)` the variants
/// use a shifted outer factorial or repeated upper parameters and do not
/// reproduce the sequence; they are kept so the mismatch stays visible.
pub fn hgf_variant_forms(
    r: u32,
    s: u32,
    lambda: &Rational,
    precision: u32,
) -> Result<Vec<(String, SeriesValue, SeriesValue)>> {
    let family = HgfFamily::new(r, s)?;
    let rel_bits = precision + GUARD_BITS;
    let inv_e = exp_neg_enclosure(&Rational::one(), rel_bits)?;
    let eval = |outer: OuterSum<'_>| -> Result<SeriesValue> {
        Ok(inv_e
            .mul(&outer.sum(None, rel_bits)?)
            .to_series_value(precision))
    };
    let derived = eval(derived_outer(family, lambda)?)?;
    let (c, q, _) = family.envelope(lambda)?;
    let mut out = Vec::new();
    match family {
        HgfFamily::ThreeTwo => {
            // 2F1(k+2, k+1; 1; lambda): the same series with the uppers swapped
            let variant = OuterSum {
                scale: Rational::one(),
                shift: 2,
                inner: Box::new(move |k| HyperParams {
                    upper: vec![rat(k as i64 + 2), rat(k as i64 + 1)],
                    lower: vec![rat(1)],
                    argument: lambda.clone(),
                }),
                envelope: (c, q, 2),
            };
            out.push((family.to_string(), eval(variant)?, derived));
        }
        HgfFamily::Diagonal(rr) => {
            if rr == 2 {
                // 2F1((k+2)/2, k/2 + 1; 1; 4 lambda), dominated by the derived F_{k+1}
                let variant = OuterSum {
                    scale: Rational::one(),
                    shift: 2,
                    inner: Box::new(move |k| {
                        let a = rat(k as i64 + 2) / rat(2);
                        HyperParams {
                            upper: vec![a.clone(), a],
                            lower: vec![rat(1)],
                            argument: rat(4) * lambda,
                        }
                    }),
                    envelope: (c.clone(), q.clone(), 2),
                };
                out.push(("G_{4,2}".to_string(), eval(variant)?, derived.clone()));
            }
            // 1/((r-1)! e) sum_k 1/(k+r-1)! rF_{r-1}(...; r^r lambda)
            let variant = OuterSum {
                scale: Rational::new(BigInt::one(), factorial(rr as u64 - 1)),
                shift: rr as u64 - 1,
                inner: Box::new(move |k| diagonal_inner(rr, k, lambda)),
                envelope: (c, q, 1),
            };
            out.push((format!("G_{{2r,r}} at r={rr}"), eval(variant)?, derived));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn families_and_radii() {
        assert_eq!(HgfFamily::new(3, 2).unwrap(), HgfFamily::ThreeTwo);
        assert_eq!(HgfFamily::new(4, 2).unwrap(), HgfFamily::Diagonal(2));
        assert!(HgfFamily::new(3, 1).is_err());
        assert_eq!(hgf_radius(3, 2).unwrap(), rat(1));
        assert_eq!(hgf_radius(4, 2).unwrap(), ratio(1, 4));
        assert_eq!(hgf_radius(6, 3).unwrap(), ratio(1, 27));
        assert_eq!(hgf_default_lambda(4, 2).unwrap(), ratio(1, 20));
    }

    #[test]
    fn root_ceil_is_an_upper_root() {
        for (x, i) in [
            (ratio(1, 5), 2),
            (ratio(4, 5), 4),
            (rat(0), 3),
            (ratio(9, 16), 2),
        ] {
            let nu = root_ceil(&x, i);
            assert!(rational_pow(&nu, i as u64) >= x);
            assert!(rational_pow(&(&nu - pow2_neg(22)), i as u64) < x || x.is_zero());
        }
    }

    #[test]
    fn envelope_dominates_inner_series() {
        for (r, s, lam) in [
            (3, 2, ratio(1, 5)),
            (4, 2, ratio(1, 20)),
            (6, 3, ratio(1, 135)),
        ] {
            let family = HgfFamily::new(r, s).unwrap();
            let (c, q, a) = family.envelope(&lam).unwrap();
            for k in [0u64, 1, 5, 20] {
                let f = hypergeometric_enclosure(&family.inner(k, &lam), 64, 100_000).unwrap();
                assert!(f.upper() <= &c * rational_pow(&q, k + a), "({r},{s}) k={k}");
            }
        }
    }

    #[test]
    fn value_at_zero_is_one() {
        for (r, s) in [(3, 2), (4, 2)] {
            let rep = hgf_compare(r, s, &rat(0), 12, HgfMode::Full, 128).unwrap();
            assert!(rep.double_sum.contains(&rat(1)));
            assert!(rep.direct_sum.contains(&rat(1)));
            assert!(rep.agree);
        }
    }

    #[test]
    fn polynomial_agreement_at_default_lambda() {
        for (r, s) in [(3, 2), (4, 2), (2, 1), (6, 3)] {
            let lam = hgf_default_lambda(r, s).unwrap();
            let rep = hgf_compare(r, s, &lam, 12, HgfMode::Polynomial, 256).unwrap();
            assert!(rep.agree, "({r},{s})");
            assert!(rep.combined_bound.to_f64() < 1e-15);
            assert!(rep.difference.to_f64() < 1e-15);
        }
        assert!(hgf_check(3, 2, &ratio(1, 20), 12, 256).unwrap());
        assert!(hgf_check(4, 2, &ratio(1, 50), 12, 256).unwrap());
    }

    #[test]
    fn full_mode_agrees_within_its_wider_bound() {
        for (r, s) in [(3, 2), (4, 2)] {
            let lam = hgf_default_lambda(r, s).unwrap();
            let rep = hgf_compare(r, s, &lam, 12, HgfMode::Full, 128).unwrap();
            assert!(rep.agree, "({r},{s})");
            // the 12-term direct sum cannot pin G to 1e-15 here
            assert!(rep.combined_bound.to_f64() > 1e-15);
        }
        // far inside the radius twelve coefficients are plenty
        let rep = hgf_compare(3, 2, &ratio(1, 1000), 12, HgfMode::Full, 128).unwrap();
        assert!(rep.agree && rep.combined_bound.to_f64() < 1e-15);
    }

    #[test]
    fn coefficient_mismatch_is_detected() {
        // dropping the constant correction shifts G by 2/e - 1, far outside any bound
        let lam = ratio(1, 20);
        let family = HgfFamily::ThreeTwo;
        let raw = derived_outer(family, &lam)
            .unwrap()
            .sum(Some(12), 140)
            .unwrap();
        let raw = exp_neg_enclosure(&rat(1), 140).unwrap().mul(&raw);
        let direct = g_direct(family, &lam, 12).unwrap();
        assert!(!raw.contains(&direct));
    }

    #[test]
    fn outside_radius_is_divergent() {
        assert!(matches!(
            hgf_check(3, 2, &rat(1), 12, 64),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            hgf_check(4, 2, &ratio(1, 4), 12, 64),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn variant_forms() {
        let lam = ratio(1, 50);
        let forms = hgf_variant_forms(3, 2, &lam, 128).unwrap();
        let (_, variant, derived) = &forms[0];
        assert!(variant.contains(&derived.value.to_rational()));
        for (label, variant, derived) in hgf_variant_forms(4, 2, &lam, 128).unwrap() {
            let gap = (variant.value.to_rational() - derived.value.to_rational()).abs();
            assert!(gap > pow2_neg(20), "{label} unexpectedly matches");
        }
        let lam = ratio(1, 200);
        for (label, variant, derived) in hgf_variant_forms(6, 3, &lam, 128).unwrap() {
            let gap = (variant.value.to_rational() - derived.value.to_rational()).abs();
            assert!(gap > pow2_neg(20), "{label} unexpectedly matches");
        }
    }
}
