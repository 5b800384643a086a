//! Exponential generating functions as exact truncated power series.
//!
//! For `r >= 2` the diagonal numbers grow too fast for their egf to converge
//! anywhere but `0`, so those identities are only checked coefficientwise.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dobinski::exp_enclosure;
use super::{Enclosure, SeriesValue, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, falling_factorial_int, rat, series_binomial_power, series_exp,
    PowerSeries, Rational,
};
use crate::stirling::{bell_number, stirling, Params};

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `(1 - (r-1) x)^{-1/(r-1)} - 1` for `r >= 2`, `e^x - 1` for `r = 1`.
fn inner_r1(r: u32, order: usize) -> Result<PowerSeries> {
    let base = match r {
        0 => return Err(Error::InvalidParams("r must be at least 1".into())),
        1 => series_exp(&PowerSeries::variable(order))?,
        _ => {
            let d = rat(r as i64 - 1);
            series_binomial_power(&(-d.recip()), &d, order)
        }
    };
    base.sub(&PowerSeries::one(order))
}

/// `exp[(1 - (r-1) x)^{-1/(r-1)} - 1]`, or `exp(e^x - 1)` for `r = 1`, to order `order`.
pub fn egf_bell_r1_series(r: u32, order: usize) -> Result<PowerSeries> {
    series_exp(&inner_r1(r, order)?)
}

/// `n! [x^n] egf_bell_r1_series(r) == B_{r,1}(n)` for all `n <= order`.
pub fn egf_bell_r1_check(r: u32, order: usize) -> Result<bool> {
    let series = egf_bell_r1_series(r, order)?;
    let p = Params::new(r, 1)?;
    for n in 0..=order {
        let exact = Rational::new(bell_number(p, n as u32)?, factorial(n as u64));
        if series.coeff(n) != exact {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(1/k!) [(1 - (r-1) x)^{-1/(r-1)} - 1]^k`.
pub fn egf_stirling_r1_series(r: u32, k: u32, order: usize) -> Result<PowerSeries> {
    if r < 2 {
        return Err(Error::InvalidParams("the S_{r,1} egf needs r >= 2".into()));
    }
    Ok(inner_r1(r, order)?.pow(k).scale(&inv_factorial(k as u64)))
}

/// `(1/k!) [(1 - (r-1) x)^{-1/(r-1)} - 1]` without the `k`-th power. Kept to
/// show that the power is required: this only matches at `k = 1`.
pub fn egf_stirling_r1_series_without_power(r: u32, k: u32, order: usize) -> Result<PowerSeries> {
    if r < 2 {
        return Err(Error::InvalidParams("the S_{r,1} egf needs r >= 2".into()));
    }
    Ok(inner_r1(r, order)?.scale(&inv_factorial(k as u64)))
}

fn matches_stirling(series: &PowerSeries, p: Params, k: u32) -> Result<bool> {
    for n in 0..=series.order() {
        let exact = Rational::new(stirling(p, n as u32, k)?, factorial(n as u64));
        if series.coeff(n) != exact {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n! [x^n] egf_stirling_r1_series(r, k) == S_{r,1}(n, k)` for all `n <= order`.
pub fn egf_stirling_r1_check(r: u32, k: u32, order: usize) -> Result<bool> {
    matches_stirling(&egf_stirling_r1_series(r, k, order)?, Params::new(r, 1)?, k)
}

/// `(-1)^k/k! sum_{p=r..k} (-1)^p C(k,p) (e^{x p^{r falling}} - 1)`.
pub fn egf_stirling_diag_series(r: u32, k: u32, order: usize) -> Result<PowerSeries> {
    Params::new(r, r)?;
    if k < r {
        return Err(Error::InvalidParams(format!(
            "the S_{{r,r}} egf needs k >= r, got k = {k}"
        )));
    }
    let mut acc = PowerSeries::zero(order);
    for p in r..=k {
        let rate = Rational::from_integer(falling_factorial_int(&BigInt::from(p), r));
        let e = series_exp(&PowerSeries::variable(order).scale(&rate))?
            .sub(&PowerSeries::one(order))?;
        let c = Rational::from_integer(binomial(k as u64, p as i64));
        acc = if (p % 2) == 0 {
            acc.add(&e.scale(&c))?
        } else {
            acc.sub(&e.scale(&c))?
        };
    }
    let sign = if k.is_multiple_of(2) { rat(1) } else { rat(-1) };
    Ok(acc.scale(&(sign * inv_factorial(k as u64))))
}

/// `n! [x^n] egf_stirling_diag_series(r, k) == S_{r,r}(n, k)` for all `n <= order`.
pub fn egf_stirling_diag_check(r: u32, k: u32, order: usize) -> Result<bool> {
    matches_stirling(
        &egf_stirling_diag_series(r, k, order)?,
        Params::new(r, r)?,
        k,
    )
}

/// `1 + sum_{k=r..k_max} egf_stirling_diag_series(r, k)`: the coherent-state
/// egf of the diagonal Bell numbers, summed termwise in `k` and truncated at
/// `x^order`. Every `k > order * r` contributes only above the truncation.
pub fn coherent_egf_diag_series(r: u32, order: usize, k_max: u32) -> Result<PowerSeries> {
    let mut acc = PowerSeries::one(order);
    for k in r..=k_max {
        acc = acc.add(&egf_stirling_diag_series(r, k, order)?)?;
    }
    Ok(acc)
}

/// Coefficientwise check that `n! [x^n]` of the termwise double sum is
/// `B_{r,r}(n)` for `n <= order`, and that the `k` beyond `order * r` add nothing.
pub fn coherent_egf_diag_check(r: u32, order: usize) -> Result<bool> {
    let k_band = order as u32 * r;
    let series = coherent_egf_diag_series(r, order, k_band)?;
    let p = Params::new(r, r)?;
    for n in 0..=order {
        let exact = Rational::new(bell_number(p, n as u32)?, factorial(n as u64));
        if series.coeff(n) != exact {
            return Ok(false);
        }
    }
    for k in (k_band + 1).max(r)..=k_band + r {
        if egf_stirling_diag_series(r, k, order)?
            .coeffs()
            .iter()
            .any(|c| !c.is_zero())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sum_n B_{r,r}(n) lambda^n / n!` as a number. Only `r = 1` converges,
/// giving `exp(e^lambda - 1)`; larger `r` is refused.
pub fn diag_egf_value(r: u32, lambda: &Rational, precision: u32) -> Result<SeriesValue> {
    if r != 1 {
        return Err(Error::Divergent(format!(
            "the egf of B_{{{r},{r}}} has zero radius of convergence; only coefficient checks are available"
        )));
    }
    let rel_bits = precision + GUARD_BITS;
    let inner = exp_enclosure(lambda, rel_bits + 4)?.sub(&Enclosure::exact(Rational::one()));
    Ok(exp_of_enclosure(&inner, rel_bits)?.to_series_value(precision))
}

/// `e^X` for `X = m +- d` with `d <= 1/2`: `e^m (1 +- 2d)` covers both ends
/// because `e^d - 1 <= 2d` and `1 - e^{-d} <= d` there.
fn exp_of_enclosure(x: &Enclosure, rel_bits: u32) -> Result<Enclosure> {
    let d = x.radius();
    if d > &Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::InvalidParams("argument enclosure too wide".into()));
    }
    let y = exp_enclosure(x.mid(), rel_bits)?;
    let radius = y.radius() + y.upper() * d * rat(2);
    Ok(Enclosure::new(
        y.mid().clone(),
        radius,
        y.terms_used() + x.terms_used(),
    ))
}
