use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::sum::{TailRule, TermSeries};
use super::{Enclosure, SeriesValue, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{falling_factorial_int, Rational};
use crate::stirling::Params;

/// Term budget used by the convenience entry points.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

fn int(k: u64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// `e^x` enclosed to relative accuracy `2^-rel_bits`.
///
/// Negative arguments are handled as `1 / e^{|x|}` to avoid cancellation.
pub fn exp_enclosure(x: &Rational, rel_bits: u32) -> Result<Enclosure> {
    if x.is_negative() {
        let pos = exp_enclosure(&-x, rel_bits + 2)?;
        let m = pos.mid();
        let d = pos.radius();
        // 1/[m - d, m + d] lies within 1/m +- d / (m (m - d))
        let radius = d / (m * (m - d));
        return Ok(Enclosure::new(m.recip(), radius, pos.terms_used()));
    }
    let ax = x.clone();
    let mut current = Rational::one();
    let term = move |k: u64| {
        if k > 0 {
            current = &current * &ax / int(k);
        }
        current.clone()
    };
    let bx = x.clone();
    TermSeries::new(
        term,
        TailRule::RatioBound(Box::new(move |k| Some(&bx / int(k + 1)))),
    )
    .nonnegative()
    .sum_to_relative(rel_bits, DEFAULT_MAX_TERMS)
}

/// `e^{-t}` enclosed to relative accuracy `2^-rel_bits`.
pub fn exp_neg_enclosure(t: &Rational, rel_bits: u32) -> Result<Enclosure> {
    exp_enclosure(&-t, rel_bits)
}

/// `sum_k (t^k / k!) w(k)` for a nonnegative integer weight `w` whose term
/// ratio decreases from index `from` on.
fn weighted_exp_sum(
    t: &Rational,
    weight: impl Fn(u64) -> BigInt,
    from: u64,
    rel_bits: u32,
    max_terms: usize,
) -> Result<Enclosure> {
    let mut power = Rational::one();
    let tt = t.clone();
    let term = move |k: u64| {
        if k > 0 {
            power = &power * &tt / int(k);
        }
        &power * Rational::from_integer(weight(k))
    };
    TermSeries::new(term, TailRule::MonotoneFrom(from))
        .nonnegative()
        .sum_to_relative(rel_bits, max_terms)
}

/// `e^{-t} * sum`, both enclosed at `rel_bits`.
fn times_exp_neg(sum: Enclosure, t: &Rational, rel_bits: u32) -> Result<Enclosure> {
    Ok(exp_neg_enclosure(t, rel_bits)?.mul(&sum))
}

fn require_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("series forms need n >= 1".into()));
    }
    Ok(())
}

/// `prod_{j=1..n} (k + (j-1)(r-s))^{s falling}` for `r >= s`.
fn c_form_weight(r: u32, s: u32, n: u32, k: u64) -> BigInt {
    let d = (r - s) as u64;
    (1..=n as u64)
        .map(|j| falling_factorial_int(&BigInt::from(k + (j - 1) * d), s))
        .product()
}

/// Enclosure of the generalized Bell polynomial at `t` with an explicit term budget.
pub fn dobinski_polynomial_enclosure(
    p: Params,
    n: u32,
    t: &Rational,
    rel_bits: u32,
    max_terms: usize,
) -> Result<Enclosure> {
    require_n(n)?;
    if !t.is_positive() {
        return Err(Error::InvalidParams(format!("t must be positive, got {t}")));
    }
    // B_{r,s} and B_{s,r} coincide entrywise, so r < s runs through the swap.
    let q = if p.r() >= p.s() { p } else { p.swapped() };
    let (r, s) = (q.r(), q.s());
    let sum = weighted_exp_sum(
        t,
        |k| c_form_weight(r, s, n, k),
        s as u64,
        rel_bits,
        max_terms,
    )?;
    times_exp_neg(sum, t, rel_bits)
}

/// `e^{-t} sum_{k>=s} (t^k/k!) prod_j (k + (j-1)(r-s))^{s falling}`.
pub fn dobinski_polynomial(p: Params, n: u32, t: &Rational, precision: u32) -> Result<SeriesValue> {
    Ok(
        dobinski_polynomial_enclosure(p, n, t, precision + GUARD_BITS, DEFAULT_MAX_TERMS)?
            .to_series_value(precision),
    )
}

/// `B_{r,s}(n)` from the Dobinski-type series at `t = 1`.
pub fn dobinski_bell(p: Params, n: u32, precision: u32) -> Result<SeriesValue> {
    dobinski_polynomial(p, n, &Rational::one(), precision)
}

/// Same as [`dobinski_bell`] but with a caller-chosen term budget.
pub fn dobinski_bell_with_budget(
    p: Params,
    n: u32,
    precision: u32,
    max_terms: usize,
) -> Result<SeriesValue> {
    Ok(
        dobinski_polynomial_enclosure(p, n, &Rational::one(), precision + GUARD_BITS, max_terms)?
            .to_series_value(precision),
    )
}

/// The Gamma-ratio form for `r > s`:
/// `(r-s)^{s(n-1)}/e sum_k (1/k!) prod_{j=1..s} Gamma(n + x_j)/Gamma(1 + x_j)`
/// with `x_j = (k+j)/(r-s)`, each ratio expanded as `prod_{m=1..n-1} (x_j + m)`.
pub fn dobinski_gamma_form(p: Params, n: u32, precision: u32) -> Result<SeriesValue> {
    require_n(n)?;
    if p.r() <= p.s() {
        return Err(Error::InvalidParams(format!(
            "the Gamma form needs r > s, got ({}, {})",
            p.r(),
            p.s()
        )));
    }
    let rel_bits = precision + GUARD_BITS;
    let d = int((p.r() - p.s()) as u64);
    let s = p.s() as u64;
    let mut power = Rational::one();
    let dd = d.clone();
    let term = move |k: u64| {
        if k > 0 {
            power /= int(k);
        }
        let mut w = power.clone();
        for j in 1..=s {
            let x = int(k + j) / &dd;
            for m in 1..n as u64 {
                w *= &x + int(m);
            }
        }
        w
    };
    let sum = TermSeries::new(term, TailRule::MonotoneFrom(0))
        .nonnegative()
        .sum_to_relative(rel_bits, DEFAULT_MAX_TERMS)?;
    let prefactor = crate::exact::rational_pow(&d, s * (n as u64 - 1));
    Ok(
        times_exp_neg(sum.scale(&prefactor), &Rational::one(), rel_bits)?
            .to_series_value(precision),
    )
}

/// The factorial-ratio form:
/// `1/e sum_{k>=0} (1/k!) prod_{j=1..n-1} (k + jr - (j-1)s)! / (k + j(r-s))!`.
pub fn dobinski_factorial_form(p: Params, n: u32, precision: u32) -> Result<SeriesValue> {
    require_n(n)?;
    let q = if p.r() >= p.s() { p } else { p.swapped() };
    let (r, s) = (q.r() as u64, q.s() as u64);
    let rel_bits = precision + GUARD_BITS;
    // (k + jr - (j-1)s)! / (k + j(r-s))! is the s-fold falling factorial of the numerator argument
    let weight = move |k: u64| -> BigInt {
        (1..n as u64)
            .map(|j| falling_factorial_int(&BigInt::from(k + j * r - (j - 1) * s), s as u32))
            .product()
    };
    let sum = weighted_exp_sum(&Rational::one(), weight, 0, rel_bits, DEFAULT_MAX_TERMS)?;
    Ok(times_exp_neg(sum, &Rational::one(), rel_bits)?.to_series_value(precision))
}

/// The diagonal form `B_{r,r}(n) = 1/e sum_k (1/k!) [(k+r)!/k!]^{n-1}`.
pub fn dobinski_diag_form(r: u32, n: u32, precision: u32) -> Result<SeriesValue> {
    require_n(n)?;
    Params::new(r, r)?;
    let rel_bits = precision + GUARD_BITS;
    let weight = move |k: u64| -> BigInt {
        let ratio = falling_factorial_int(&BigInt::from(k + r as u64), r);
        num_traits::pow(ratio, (n - 1) as usize)
    };
    let sum = weighted_exp_sum(&Rational::one(), weight, 0, rel_bits, DEFAULT_MAX_TERMS)?;
    Ok(times_exp_neg(sum, &Rational::one(), rel_bits)?.to_series_value(precision))
}
