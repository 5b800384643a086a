//! Numerical checks on a truncated Fock space.
//!
//! `a` and `a†` act on the span of `|0>, ..., |D-1>` as dense `D x D`
//! matrices of [`BigFloat`]s. Words are applied to a truncated coherent state
//! one letter at a time, so an `n`-fold product costs `O(n D^2)` and the
//! power matrix is never formed.
//!
//! Only real `z >= 0` is supported. For `r != s` the expectation at a complex
//! `z` with `|z| = 1` differs from the one at `z = 1` by the phase
//! `conj(z)^{n(r-s)}`; nothing here depends on it.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{rational_pow, BigFloat, Rational};
use crate::stirling::{bell_number, bell_polynomial, Params};

/// Guard bits carried by intermediate BigFloat arithmetic.
const GUARD: u32 = 32;

/// Extra basis states required above `knee + n max(r, s)`.
pub const SAFETY_MARGIN: usize = 16;

/// Truncated `a` or `a†`.
#[derive(Clone, Debug)]
pub struct FockOperator {
    dim: usize,
    entries: Vec<BigFloat>,
}

impl FockOperator {
    fn zeros(dim: usize, precision: u32) -> Self {
        FockOperator {
            dim,
            entries: vec![BigFloat::zero(precision); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigFloat {
        &self.entries[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, value: BigFloat) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Matrix-vector product; zero entries are skipped.
    pub fn apply(&self, v: &[BigFloat]) -> Vec<BigFloat> {
        assert_eq!(v.len(), self.dim, "vector length must match the dimension");
        let precision = v.first().map_or(64, BigFloat::precision);
        (0..self.dim)
            .map(|i| {
                let mut acc = BigFloat::zero(precision);
                for (j, x) in v.iter().enumerate() {
                    let m = self.get(i, j);
                    if !m.is_zero() && !x.is_zero() {
                        acc = acc.add(&m.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let precision = self.entries[0].precision();
        let mut out = Self::zeros(self.dim, precision);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = BigFloat::zero(precision);
                for k in 0..self.dim {
                    let (x, y) = (self.get(i, k), other.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        FockOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x.sub(y))
                .collect(),
        }
    }
}

/// `(a, a†)` on a `dim`-dimensional truncation: `a[n-1][n] = sqrt(n)`.
pub fn build_ops(dim: usize, precision: u32) -> Result<(FockOperator, FockOperator)> {
    if dim < 2 {
        return Err(Error::InvalidParams(format!(
            "Fock dimension must be at least 2, got {dim}"
        )));
    }
    let mut a = FockOperator::zeros(dim, precision);
    for n in 1..dim {
        a.set(n - 1, n, BigFloat::from_i64(n as i64, precision).sqrt());
    }
    let adag = a.transpose();
    Ok((a, adag))
}

/// `|z>` truncated to `dim` states.
#[derive(Clone, Debug)]
pub struct CoherentVector {
    pub z: BigFloat,
    pub dim: usize,
    pub amps: Vec<BigFloat>,
    /// `1 - sum amps[n]^2`, i.e. `e^{-z^2} sum_{n >= dim} z^{2n}/n!`, bounded
    /// above by the first omitted term over `1 - z^2/(dim+1)`.
    pub tail_mass: BigFloat,
}

/// `e^{-z^2} z^{2D}/D! / (1 - z^2/(D+1))`, or `None` when `z^2 >= D + 1`.
fn tail_mass_bound(z: &BigFloat, dim: usize, precision: u32) -> Option<BigFloat> {
    let z2 = z.mul(z);
    let ratio = z2.div(&BigFloat::from_i64(dim as i64 + 1, precision));
    if ratio >= BigFloat::one(precision) {
        return None;
    }
    let mut first = z2.neg().exp();
    for n in 1..=dim {
        first = first.mul(&z2).div(&BigFloat::from_i64(n as i64, precision));
    }
    // a few ulps of upward slack for the rounded arithmetic
    let slack = BigFloat::one(precision).add(&BigFloat::pow2(-(precision as i64) + 8, precision));
    Some(first.div(&BigFloat::one(precision).sub(&ratio)).mul(&slack))
}

/// Coherent amplitudes with the default tail threshold `2^-precision`.
pub fn coherent_state(z: &BigFloat, dim: usize, precision: u32) -> Result<CoherentVector> {
    coherent_state_with_threshold(
        z,
        dim,
        precision,
        &BigFloat::pow2(-(precision as i64), precision),
    )
}

pub fn coherent_state_with_threshold(
    z: &BigFloat,
    dim: usize,
    precision: u32,
    threshold: &BigFloat,
) -> Result<CoherentVector> {
    if z.is_negative() {
        return Err(Error::InvalidParams(
            "coherent states here need real z >= 0".into(),
        ));
    }
    if dim < 2 {
        return Err(Error::InvalidParams(format!(
            "Fock dimension must be at least 2, got {dim}"
        )));
    }
    let work = precision + GUARD;
    let z = z.with_precision(work);
    let tail = tail_mass_bound(&z, dim, work);
    let acceptable = |t: &Option<BigFloat>| t.as_ref().is_some_and(|t| t <= threshold);
    if !acceptable(&tail) {
        let mut suggested = dim + 1;
        while !acceptable(&tail_mass_bound(&z, suggested, work)) {
            suggested += 1;
        }
        return Err(Error::TailMassTooLarge {
            dim,
            tail_mass: tail.map_or(f64::INFINITY, |t| t.to_f64()),
            suggested_dim: suggested,
        });
    }
    let half = BigFloat::from_rational(&Rational::new(1.into(), 2.into()), work);
    let mut amp = z.mul(&z).mul(&half).neg().exp();
    let mut amps = Vec::with_capacity(dim);
    for n in 0..dim {
        if n > 0 {
            amp = amp.mul(&z).div(&BigFloat::from_i64(n as i64, work).sqrt());
        }
        amps.push(amp.clone());
    }
    Ok(CoherentVector {
        z,
        dim,
        amps,
        tail_mass: tail.expect("checked above").with_precision(precision),
    })
}

impl CoherentVector {
    /// `1 - sum amps^2`, computed numerically; should sit near `tail_mass`.
    pub fn norm_defect(&self) -> BigFloat {
        let precision = self.z.precision();
        let norm = self
            .amps
            .iter()
            .fold(BigFloat::zero(precision), |acc, x| acc.add(&x.mul(x)));
        BigFloat::one(precision).sub(&norm)
    }

    /// `||(a - z)|z>_D||`. Only the top component survives: `a` has nothing
    /// to lower into index `D-1`.
    pub fn eigen_residual(&self, a: &FockOperator) -> BigFloat {
        let image = a.apply(&self.amps);
        let precision = self.z.precision();
        image
            .iter()
            .zip(&self.amps)
            .map(|(x, y)| x.sub(&self.z.mul(y)))
            .fold(BigFloat::zero(precision), |acc, d| acc.add(&d.mul(&d)))
            .sqrt()
    }

    /// `sqrt(D * tail_mass)`, which dominates [`Self::eigen_residual`] since
    /// `z^2 amps[D-1]^2 = D amps[D]^2 <= D tail_mass`.
    pub fn eigen_residual_bound(&self) -> BigFloat {
        self.tail_mass.mul_int(&BigInt::from(self.dim)).sqrt()
    }

    /// Largest index whose amplitude exceeds `2^-bits`.
    pub fn knee(&self, bits: u32) -> usize {
        let cutoff = BigFloat::pow2(-(bits as i64), self.z.precision());
        self.amps.iter().rposition(|a| a > &cutoff).unwrap_or(0)
    }

    /// `<v|w>` over the truncated basis.
    pub fn inner(&self, w: &[BigFloat]) -> BigFloat {
        let precision = self.z.precision();
        self.amps
            .iter()
            .zip(w)
            .fold(BigFloat::zero(precision), |acc, (x, y)| acc.add(&x.mul(y)))
    }
}

/// First index `m` where `e^{-z^2/2} z^m / sqrt(m!)` drops below `2^-bits`
/// past the peak, found without truncating.
fn amplitude_knee(z: &BigFloat, bits: u32) -> usize {
    let work = z.precision();
    let cutoff = BigFloat::pow2(-(bits as i64), work);
    let half = BigFloat::from_rational(&Rational::new(1.into(), 2.into()), work);
    let mut amp = z.mul(z).mul(&half).neg().exp();
    let peak = z.mul(z).to_f64().ceil() as usize;
    let mut m = 0;
    loop {
        if m >= peak && amp <= cutoff {
            return m.saturating_sub(1);
        }
        m += 1;
        amp = amp.mul(z).div(&BigFloat::from_i64(m as i64, work).sqrt());
        if amp.is_zero() {
            return m;
        }
    }
}

/// Smallest dimension the truncation policy accepts for `[(a†)^r a^s]^n` at `z`.
pub fn required_dim(p: Params, n: u32, z: &BigFloat, precision: u32) -> usize {
    let z = z.with_precision(precision + GUARD);
    amplitude_knee(&z, precision) + n as usize * p.r().max(p.s()) as usize + SAFETY_MARGIN
}

/// `<z| W |z>` on a `dim`-dimensional truncation, `W = [(a†)^r a^s]^n`,
/// letters applied right to left.
fn truncated_expectation(
    p: Params,
    n: u32,
    state: &CoherentVector,
    ops: &(FockOperator, FockOperator),
) -> BigFloat {
    let (a, adag) = ops;
    let mut v = state.amps.clone();
    for _ in 0..n {
        for _ in 0..p.s() {
            v = a.apply(&v);
        }
        for _ in 0..p.r() {
            v = adag.apply(&v);
        }
    }
    state.inner(&v)
}

/// A checked truncated expectation and the evidence behind it.
#[derive(Clone, Debug)]
pub struct FockReport {
    pub value: BigFloat,
    pub value_larger_dim: BigFloat,
    pub relative_change: BigFloat,
    pub dim: usize,
    pub required_dim: usize,
}

/// Relative tolerance for the `D -> D + 16` stability check: `2^-(3/4 precision)`.
pub fn stability_tolerance(precision: u32) -> BigFloat {
    BigFloat::pow2(-((precision as i64 * 3) / 4), precision)
}

/// Like [`expectation_power`], returning the stability evidence as well.
pub fn expectation_power_report(
    p: Params,
    n: u32,
    z: &BigFloat,
    dim: usize,
    precision: u32,
) -> Result<FockReport> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "expectation_power needs n >= 1".into(),
        ));
    }
    let needed = required_dim(p, n, z, precision);
    if dim < needed {
        return Err(Error::DimensionTooSmall {
            dim,
            suggested_dim: needed,
        });
    }
    let work = precision + GUARD;
    let at = |d: usize| -> Result<BigFloat> {
        let state = coherent_state(z, d, precision)?;
        let ops = build_ops(d, work)?;
        Ok(truncated_expectation(p, n, &state, &ops))
    };
    let value = at(dim)?;
    let larger = at(dim + SAFETY_MARGIN)?;
    let change = value.sub(&larger).abs();
    let relative = if larger.is_zero() {
        change.clone()
    } else {
        change.div(&larger.abs())
    };
    if relative > stability_tolerance(precision) {
        return Err(Error::Unstable {
            change: relative.to_f64(),
            suggested_dim: dim + 2 * SAFETY_MARGIN,
        });
    }
    Ok(FockReport {
        value: value.with_precision(precision),
        value_larger_dim: larger.with_precision(precision),
        relative_change: relative.with_precision(precision),
        dim,
        required_dim: needed,
    })
}

/// `<z|[(a†)^r a^s]^n|z>` by repeated matrix-vector products on a
/// `dim`-dimensional truncation.
pub fn expectation_power(
    p: Params,
    n: u32,
    z: &BigFloat,
    dim: usize,
    precision: u32,
) -> Result<BigFloat> {
    Ok(expectation_power_report(p, n, z, dim, precision)?.value)
}

/// `z^{n|r-s|} B_{r,s}(n, z^2)`: the exact value of the coherent expectation for real `z`.
pub fn exact_expectation(p: Params, n: u32, z: &Rational) -> Result<Rational> {
    let offset = (p.r() as i64 - p.s() as i64).unsigned_abs() * n as u64;
    Ok(rational_pow(z, offset) * bell_polynomial(p, n, &(z * z))?)
}

/// Relative error of `value` against a nonzero exact target.
pub fn relative_error(value: &BigFloat, exact: &Rational) -> BigFloat {
    let precision = value.precision();
    let diff = (value.to_rational() - exact).abs();
    let rel = if exact == &Rational::from_integer(0.into()) {
        diff
    } else {
        diff / exact.abs()
    };
    BigFloat::from_rational(&rel, precision)
}

/// `<1|(a†a)^n|1> == B_{1,1}(n)` within the stability tolerance.
pub fn katriel_check(n: u32, dim: usize, precision: u32) -> Result<bool> {
    let p = Params::new(1, 1)?;
    let value = expectation_power(p, n, &BigFloat::one(precision), dim, precision)?;
    let exact = Rational::from_integer(bell_number(p, n)?);
    Ok(relative_error(&value, &exact) <= stability_tolerance(precision))
}

/// `<v| e^{lambda a†a} |v> = sum_m amps[m]^2 e^{lambda m}`.
pub fn number_exp_expectation(state: &CoherentVector, lambda: &BigFloat) -> BigFloat {
    let precision = state.z.precision();
    let step = lambda.with_precision(precision).exp();
    let mut weight = BigFloat::one(precision);
    let mut acc = BigFloat::zero(precision);
    for amp in &state.amps {
        acc = acc.add(&amp.mul(amp).mul(&weight));
        weight = weight.mul(&step);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::oracle::{coherent_expectation_exact, power_word};

    fn p(r: u32, s: u32) -> Params {
        Params::new(r, s).unwrap()
    }

    fn bf(x: &Rational) -> BigFloat {
        BigFloat::from_rational(x, 256)
    }

    #[test]
    fn small_operators() {
        let (a, adag) = build_ops(2, 64).unwrap();
        assert_eq!(a.get(0, 1).to_rational(), rat(1));
        assert!(a.get(0, 0).is_zero() && a.get(1, 0).is_zero() && a.get(1, 1).is_zero());
        assert_eq!(adag.get(1, 0).to_rational(), rat(1));
        let (a, adag) = build_ops(3, 64).unwrap();
        let number = adag.mul(&a);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { i as i64 } else { 0 };
                assert!((number.get(i, j).to_f64() - want as f64).abs() < 1e-15);
            }
        }
        assert!(build_ops(1, 64).is_err());
    }

    #[test]
    fn truncated_commutator() {
        let d = 64;
        let (a, adag) = build_ops(d, 128).unwrap();
        let comm = a.mul(&adag).sub(&adag.mul(&a));
        for i in 0..d {
            for j in 0..d {
                let want = match (i == j, i == d - 1) {
                    (true, false) => 1.0,
                    (true, true) => 1.0 - d as f64,
                    _ => 0.0,
                };
                assert!((comm.get(i, j).to_f64() - want).abs() < 1e-30, "({i},{j})");
            }
        }
    }

    #[test]
    fn coherent_state_examples() {
        let vacuum = coherent_state(&BigFloat::zero(128), 8, 128).unwrap();
        assert_eq!(vacuum.amps[0].to_rational(), rat(1));
        assert!(vacuum.amps[1..].iter().all(BigFloat::is_zero));
        let one = coherent_state(&BigFloat::one(256), 64, 256).unwrap();
        assert!(one.tail_mass.to_f64() < 1e-60);
        let (a, _) = build_ops(64, 288).unwrap();
        assert!(one.eigen_residual(&a) <= one.eigen_residual_bound());
        assert!(one.norm_defect().abs().to_f64() < 1e-60);
    }

    #[test]
    fn tail_mass_guard() {
        let err = coherent_state(&BigFloat::from_i64(3, 128), 10, 128).unwrap_err();
        match err {
            Error::TailMassTooLarge {
                dim, suggested_dim, ..
            } => {
                assert_eq!(dim, 10);
                assert!(coherent_state(&BigFloat::from_i64(3, 128), suggested_dim, 128).is_ok());
                assert!(
                    coherent_state(&BigFloat::from_i64(3, 128), suggested_dim - 1, 128).is_err()
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(coherent_state(&BigFloat::from_i64(-1, 64), 8, 64).is_err());
    }

    #[test]
    fn number_operator_mean_is_z_squared() {
        let v = expectation_power(p(1, 1), 1, &BigFloat::one(256), 128, 256).unwrap();
        assert!(relative_error(&v, &rat(1)).to_f64() < 1e-60);
    }

    #[test]
    fn expectation_examples() {
        let cases = [
            (p(1, 1), 3, rat(1), rat(5)),
            (p(2, 2), 2, rat(1), rat(7)),
            (p(1, 1), 2, ratio(1, 2), ratio(5, 16)),
        ];
        for (params, n, z, want) in cases {
            let v = expectation_power(params, n, &bf(&z), 128, 256).unwrap();
            assert!(
                relative_error(&v, &want).to_f64() < 1e-30,
                "{params:?} n={n}"
            );
            assert_eq!(exact_expectation(params, n, &z).unwrap(), want);
        }
    }

    #[test]
    fn exact_target_matches_oracle() {
        for (r, s) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
            for n in 1..=3 {
                for z in [ratio(1, 2), rat(1), rat(2)] {
                    let nf = power_word(p(r, s), n).unwrap();
                    assert_eq!(
                        exact_expectation(p(r, s), n, &z).unwrap(),
                        coherent_expectation_exact(&nf, &z),
                        "({r},{s}) n={n} z={z}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_words_see_only_z_squared() {
        for z in [ratio(1, 2), rat(1), rat(2)] {
            for r in 1..=2 {
                let params = p(r, r);
                let want = bell_polynomial(params, 3, &(&z * &z)).unwrap();
                let dim = required_dim(params, 3, &bf(&z), 256);
                let v = expectation_power(params, 3, &bf(&z), dim, 256).unwrap();
                assert!(relative_error(&v, &want).to_f64() < 1e-30, "r={r} z={z}");
            }
        }
    }

    #[test]
    fn hermitian_conjugate_word_gives_same_value() {
        let z = bf(&ratio(1, 2));
        let fwd = expectation_power(p(2, 1), 2, &z, 128, 256).unwrap();
        let back = expectation_power(p(1, 2), 2, &z, 128, 256).unwrap();
        assert!(relative_error(&fwd, &back.to_rational()).to_f64() < 1e-40);
    }

    #[test]
    fn dimension_policy() {
        let z = BigFloat::one(256);
        let need = required_dim(p(1, 1), 3, &z, 256);
        assert!(need <= 128);
        assert!(matches!(
            expectation_power(p(1, 1), 3, &z, need - 1, 256),
            Err(Error::DimensionTooSmall { suggested_dim, .. }) if suggested_dim == need
        ));
        assert!(expectation_power(p(1, 1), 3, &z, need, 256).is_ok());
    }

    #[test]
    fn error_shrinks_as_dimension_grows() {
        // below the policy threshold the raw truncation error is visible and decays
        let z = BigFloat::one(128 + GUARD);
        let exact = rat(5);
        let mut last: Option<f64> = None;
        for d in [8usize, 12, 16, 20, 24] {
            let state = coherent_state_with_threshold(&z, d, 128, &BigFloat::one(128)).unwrap();
            let ops = build_ops(d, 128 + GUARD).unwrap();
            let err =
                relative_error(&truncated_expectation(p(1, 1), 3, &state, &ops), &exact).to_f64();
            if let Some(prev) = last {
                assert!(err <= prev / 2.0, "d={d}: {err} vs {prev}");
            }
            last = Some(err);
        }
    }

    #[test]
    fn katriel_values() {
        for n in [1, 4, 6] {
            assert!(katriel_check(n, 128, 256).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn number_exponential_matches_classical_egf() {
        // <1| e^{lambda a†a} |1> = exp(e^lambda - 1)
        let state = coherent_state(&BigFloat::one(128), 96, 128).unwrap();
        let lambda = BigFloat::from_rational(&ratio(1, 2), 160);
        let v = number_exp_expectation(&state, &lambda);
        let want = (0.5f64.exp() - 1.0).exp();
        assert!((v.to_f64() - want).abs() < 1e-14);
    }
}
