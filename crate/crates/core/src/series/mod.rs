//! Certified evaluation of the infinite series attached to the generalized
//! Bell numbers, and exact checks of their generating functions.
//!
//! Every term is computed as an exact rational. A partial sum plus a rigorous
//! tail bound gives an [`Enclosure`], which is rounded once into a
//! [`SeriesValue`] at the requested precision. No floating-point Gamma
//! function is evaluated anywhere: Gamma ratios are reduced to rational
//! products first.

mod closed_forms;
mod dobinski;
mod egf;
mod hgf;
mod hyper;
mod sum;

pub use closed_forms::{
    bell_r1_hypergeometric, bell_r1_hypergeometric_check, family_bell, family_bell_check,
    family_bell_general, family_bell_general_check, kummer_bell, kummer_bell_check, laguerre,
    laguerre_bell_check,
};
pub use dobinski::{
    dobinski_bell, dobinski_bell_with_budget, dobinski_diag_form, dobinski_factorial_form,
    dobinski_gamma_form, dobinski_polynomial, dobinski_polynomial_enclosure, exp_enclosure,
    exp_neg_enclosure, DEFAULT_MAX_TERMS,
};
pub use egf::{
    coherent_egf_diag_check, coherent_egf_diag_series, diag_egf_value, egf_bell_r1_check,
    egf_bell_r1_series, egf_stirling_diag_check, egf_stirling_diag_series, egf_stirling_r1_check,
    egf_stirling_r1_series, egf_stirling_r1_series_without_power,
};
pub use hgf::{
    hgf_check, hgf_compare, hgf_default_lambda, hgf_radius, hgf_variant_forms, HgfFamily, HgfMode,
    HgfReport,
};
pub use hyper::{hypergeometric, hypergeometric_enclosure, HyperParams};

use num_traits::{One, Signed, Zero};

use crate::exact::{pow2_neg, BigFloat, Rational};

/// Guard bits added to every internal relative target.
pub(crate) const GUARD_BITS: u32 = 16;

/// Exact interval `[mid - radius, mid + radius]` known to contain a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    mid: Rational,
    radius: Rational,
    terms_used: usize,
}

impl Enclosure {
    pub fn exact(value: Rational) -> Self {
        Enclosure {
            mid: value,
            radius: Rational::zero(),
            terms_used: 0,
        }
    }

    pub fn new(mid: Rational, radius: Rational, terms_used: usize) -> Self {
        assert!(
            !radius.is_negative(),
            "enclosure radius must be nonnegative"
        );
        Enclosure {
            mid,
            radius,
            terms_used,
        }
    }

    /// A partial sum with tail bound `tail`; for a series of nonnegative terms
    /// the true value lies in `[sum, sum + tail]`.
    pub(crate) fn from_partial(
        sum: Rational,
        tail: Rational,
        terms_used: usize,
        nonnegative: bool,
    ) -> Self {
        if nonnegative {
            let half = &tail / Rational::from_integer(2.into());
            Enclosure::new(sum + &half, half, terms_used)
        } else {
            Enclosure::new(sum, tail, terms_used)
        }
    }

    pub fn mid(&self) -> &Rational {
        &self.mid
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn terms_used(&self) -> usize {
        self.terms_used
    }

    pub fn lower(&self) -> Rational {
        &self.mid - &self.radius
    }

    pub fn upper(&self) -> Rational {
        &self.mid + &self.radius
    }

    pub fn contains(&self, value: &Rational) -> bool {
        (&self.mid - value).abs() <= self.radius
    }

    pub fn add(&self, other: &Self) -> Self {
        Enclosure::new(
            &self.mid + &other.mid,
            &self.radius + &other.radius,
            self.terms_used + other.terms_used,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Enclosure::new(
            &self.mid - &other.mid,
            &self.radius + &other.radius,
            self.terms_used + other.terms_used,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let radius = self.mid.abs() * &other.radius
            + other.mid.abs() * &self.radius
            + &self.radius * &other.radius;
        Enclosure::new(
            &self.mid * &other.mid,
            radius,
            self.terms_used + other.terms_used,
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Enclosure::new(
            &self.mid * factor,
            &self.radius * factor.abs(),
            self.terms_used,
        )
    }

    /// Rounds to a [`SeriesValue`] at `precision` bits. The stored tail bound
    /// is rounded upward so it still covers the exact radius.
    pub fn to_series_value(&self, precision: u32) -> SeriesValue {
        let inflate = Rational::one() + pow2_neg(precision.saturating_sub(2));
        SeriesValue {
            value: BigFloat::from_rational(&self.mid, precision),
            tail_bound: BigFloat::from_rational(&(&self.radius * inflate), precision),
            terms_used: self.terms_used,
            precision_bits: precision,
        }
    }
}

/// An arbitrary-precision approximation with a certified truncation bound.
///
/// The exact sum lies within `tail_bound` of `value`, up to one rounding of
/// `value` at `precision_bits`.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: BigFloat,
    pub tail_bound: BigFloat,
    pub terms_used: usize,
    pub precision_bits: u32,
}

impl SeriesValue {
    /// Rounding allowance: twice the half-ulp of `value`.
    pub fn rounding_allowance(&self) -> Rational {
        self.value.to_rational().abs() * pow2_neg(self.precision_bits.saturating_sub(1))
    }

    /// True when `target` is within `tail_bound` plus the rounding allowance.
    pub fn contains(&self, target: &Rational) -> bool {
        let diff = (self.value.to_rational() - target).abs();
        diff <= self.tail_bound.to_rational() + self.rounding_allowance()
    }

    /// `|value - target|` as a float, for reporting.
    pub fn error_against(&self, target: &Rational) -> BigFloat {
        BigFloat::from_rational(
            &(self.value.to_rational() - target).abs(),
            self.precision_bits,
        )
    }
}
