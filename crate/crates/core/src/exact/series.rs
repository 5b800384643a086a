use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Truncated formal power series `sum c_i x^i + O(x^(order+1))` with exact
/// rational coefficients.
///
/// Binary operations require equal truncation orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients past `order` are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `x`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i`; zero beyond the truncation order.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `f(c x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut power = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power *= c;
                out
            })
            .collect();
        PowerSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exponent {
            acc = acc.mul(self).expect("orders match");
        }
        acc
    }
}

/// `exp(f)` for a series with zero constant term.
///
/// Uses `g' = f' g`, i.e. `n g_n = sum_{i=1..n} i f_i g_{n-i}`.
pub fn series_exp(f: &PowerSeries) -> Result<PowerSeries> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let order = f.order();
    let mut g = vec![Rational::zero(); order + 1];
    g[0] = Rational::one();
    for n in 1..=order {
        let mut acc = Rational::zero();
        for i in 1..=n {
            let fi = &f.coeffs[i];
            if !fi.is_zero() {
                acc += fi * &g[n - i] * BigInt::from(i);
            }
        }
        g[n] = acc / BigInt::from(n);
    }
    Ok(PowerSeries { coeffs: g })
}

/// `(1 - c x)^alpha` via the generalized binomial series.
pub fn series_binomial_power(alpha: &Rational, c: &Rational, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    // C(alpha, i) (-c)^i, built incrementally
    let mut term = Rational::one();
    let minus_c = -c.clone();
    for i in 0..=order {
        coeffs.push(term.clone());
        let i = BigInt::from(i);
        term = term * (alpha - Rational::from_integer(i.clone())) / Rational::from_integer(i + 1)
            * &minus_c;
    }
    PowerSeries { coeffs }
}
