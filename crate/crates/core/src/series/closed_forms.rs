//! Hypergeometric and orthogonal-polynomial closed forms of generalized Bell
//! numbers, each checked against the exact row sums.

use num_bigint::BigInt;
use num_traits::One;

use super::dobinski::{exp_neg_enclosure, DEFAULT_MAX_TERMS};
use super::hyper::{hypergeometric_enclosure, HyperParams};
use super::{Enclosure, SeriesValue, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat, ratio, rational_pow, rising_factorial, Rational};
use crate::stirling::{bell_number, Params};

/// Associated Laguerre polynomial `L_m^{(alpha)}(x)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j + 1 + alpha - x) L_j - (j + alpha) L_{j-1}`.
pub fn laguerre(m: u32, alpha: &Rational, x: &Rational) -> Rational {
    let mut prev = Rational::one();
    if m == 0 {
        return prev;
    }
    let mut cur = Rational::one() + alpha - x;
    for j in 1..m as i64 {
        let jr = rat(j);
        let next = ((rat(2 * j + 1) + alpha - x) * &cur - (&jr + alpha) * &prev) / rat(j + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(n-1)! L_{n-1}^{(1)}(-1) == B_{2,1}(n)`, exactly.
pub fn laguerre_bell_check(n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "laguerre_bell_check needs n >= 1".into(),
        ));
    }
    let lhs = Rational::from_integer(factorial(n as u64 - 1)) * laguerre(n - 1, &rat(1), &rat(-1));
    let exact = bell_number(Params::new(2, 1)?, n)?;
    Ok(lhs == Rational::from_integer(exact))
}

/// `sum_i c_i * pFq_i`, times `e^{-1}`, as an enclosure.
fn combine(parts: &[(Rational, HyperParams)], rel_bits: u32) -> Result<Enclosure> {
    let mut acc = Enclosure::exact(Rational::from_integer(BigInt::from(0)));
    for (c, h) in parts {
        acc = acc.add(&hypergeometric_enclosure(h, rel_bits, DEFAULT_MAX_TERMS)?.scale(c));
    }
    Ok(exp_neg_enclosure(&Rational::one(), rel_bits)?.mul(&acc))
}

fn evaluate(parts: &[(Rational, HyperParams)], precision: u32) -> Result<SeriesValue> {
    Ok(combine(parts, precision + GUARD_BITS)?.to_series_value(precision))
}

fn require_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("closed forms need n >= 1".into()));
    }
    Ok(())
}

fn bracket_exact(v: &SeriesValue, p: Params, n: u32) -> Result<bool> {
    Ok(v.contains(&Rational::from_integer(bell_number(p, n)?)))
}

/// `B_{2r,r}(n) = (rn)!/(e r!) 1F1(rn + 1; r + 1; 1)`.
pub fn kummer_bell(r: u32, n: u32, precision: u32) -> Result<SeriesValue> {
    require_n(n)?;
    Params::new(2 * r, r)?;
    let rn = r as u64 * n as u64;
    let prefactor = Rational::new(factorial(rn), factorial(r as u64));
    let h = HyperParams::new(vec![rat(rn as i64 + 1)], vec![rat(r as i64 + 1)], rat(1))?;
    evaluate(&[(prefactor, h)], precision)
}

/// True iff the exact `B_{2r,r}(n)` lies in the certified interval of [`kummer_bell`].
pub fn kummer_bell_check(r: u32, n: u32, precision: u32) -> Result<bool> {
    bracket_exact(&kummer_bell(r, n, precision)?, Params::new(2 * r, r)?, n)
}

/// `1/e [prod_{j=1..r} (p(n-1)+j)!/(pj)!]
///     rFr(pn+1, pn+1+p, ..., pn+1+p(r-1); 1+p, 1+2p, ..., 1+rp; 1)`.
///
/// This prefactor reproduces `B_{pr+p,pr}(n)` only for `p = 1`; see
/// [`family_bell_general`] for the form that holds for every `p`.
pub fn family_bell(p: u32, r: u32, n: u32, precision: u32) -> Result<SeriesValue> {
    family_with_prefactor(p, r, n, precision, |pp, j, nn| pp * (nn - 1) + j)
}

/// `B_{pr+p,pr}(n)` with prefactor `prod_{j=1..r} (p(n-1+j))!/(pj)!` and the
/// same `rFr` as [`family_bell`]. Agrees with it at `p = 1`.
pub fn family_bell_general(p: u32, r: u32, n: u32, precision: u32) -> Result<SeriesValue> {
    family_with_prefactor(p, r, n, precision, |pp, j, nn| pp * (nn - 1 + j))
}

fn family_with_prefactor(
    p: u32,
    r: u32,
    n: u32,
    precision: u32,
    numerator: impl Fn(u64, u64, u64) -> u64,
) -> Result<SeriesValue> {
    require_n(n)?;
    if p == 0 || r == 0 {
        return Err(Error::InvalidParams(
            "the family form needs p, r >= 1".into(),
        ));
    }
    let (pp, rr, nn) = (p as u64, r as u64, n as u64);
    let mut prefactor = Rational::one();
    for j in 1..=rr {
        prefactor *= Rational::new(factorial(numerator(pp, j, nn)), factorial(pp * j));
    }
    let upper = (0..rr)
        .map(|i| rat((pp * nn + 1 + pp * i) as i64))
        .collect();
    let lower = (1..=rr).map(|i| rat((1 + i * pp) as i64)).collect();
    let h = HyperParams::new(upper, lower, rat(1))?;
    evaluate(&[(prefactor, h)], precision)
}

/// True iff the exact `B_{pr+p,pr}(n)` lies in the interval of [`family_bell`].
pub fn family_bell_check(p: u32, r: u32, n: u32, precision: u32) -> Result<bool> {
    let v = family_bell(p, r, n, precision)?;
    bracket_exact(&v, Params::new(p * r + p, p * r)?, n)
}

/// True iff the exact `B_{pr+p,pr}(n)` lies in the interval of [`family_bell_general`].
pub fn family_bell_general_check(p: u32, r: u32, n: u32, precision: u32) -> Result<bool> {
    let v = family_bell_general(p, r, n, precision)?;
    bracket_exact(&v, Params::new(p * r + p, p * r)?, n)
}

/// `B_{r,1}(n)` as a combination of `1F_{r-1}` functions at `(r-1)^{1-r}`,
/// for `r` in `2..=4`. Gamma ratios are reduced to Pochhammer symbols:
/// `Gamma(n + a)/Gamma(a) = (a)_n`.
pub fn bell_r1_hypergeometric(r: u32, n: u32, precision: u32) -> Result<SeriesValue> {
    require_n(n)?;
    let nn = n as u64;
    let n_fact = Rational::from_integer(factorial(nn));
    let shifted = |a: Rational| a + rat(n as i64);
    let parts = match r {
        2 => vec![(
            n_fact,
            HyperParams::new(vec![rat(n as i64 + 1)], vec![rat(2)], rat(1))?,
        )],
        3 => {
            let scale = rational_pow(&rat(2), nn - 1);
            let half = ratio(1, 2);
            vec![
                (
                    &scale * rat(2) * rising_factorial(&half, nn),
                    HyperParams::new(
                        vec![shifted(half.clone())],
                        vec![half, ratio(3, 2)],
                        ratio(1, 4),
                    )?,
                ),
                (
                    &scale * n_fact,
                    HyperParams::new(
                        vec![rat(n as i64 + 1)],
                        vec![ratio(3, 2), rat(2)],
                        ratio(1, 4),
                    )?,
                ),
            ]
        }
        4 => {
            let scale = rational_pow(&rat(3), nn - 1) / rat(2);
            let (third, two_thirds) = (ratio(1, 3), ratio(2, 3));
            let x = ratio(1, 27);
            vec![
                (
                    &scale * rat(6) * rising_factorial(&third, nn),
                    HyperParams::new(
                        vec![shifted(third.clone())],
                        vec![third, two_thirds.clone(), ratio(4, 3)],
                        x.clone(),
                    )?,
                ),
                (
                    &scale * rat(3) * rising_factorial(&two_thirds, nn),
                    HyperParams::new(
                        vec![shifted(two_thirds.clone())],
                        vec![two_thirds, ratio(4, 3), ratio(5, 3)],
                        x.clone(),
                    )?,
                ),
                (
                    &scale * n_fact,
                    HyperParams::new(
                        vec![rat(n as i64 + 1)],
                        vec![ratio(4, 3), ratio(5, 3), rat(2)],
                        x,
                    )?,
                ),
            ]
        }
        _ => {
            return Err(Error::InvalidParams(format!(
                "hypergeometric B_{{r,1}} forms are implemented for r in 2..=4, got {r}"
            )))
        }
    };
    evaluate(&parts, precision)
}

/// True iff the exact `B_{r,1}(n)` lies in the interval of [`bell_r1_hypergeometric`].
pub fn bell_r1_hypergeometric_check(r: u32, n: u32, precision: u32) -> Result<bool> {
    bracket_exact(
        &bell_r1_hypergeometric(r, n, precision)?,
        Params::new(r, 1)?,
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::pow2_neg;
    use num_traits::Signed;

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, &rat(1), &rat(-1)), rat(1));
        // L_1^{(1)}(y) = 2 - y
        assert_eq!(laguerre(1, &rat(1), &rat(-1)), rat(3));
        assert_eq!(laguerre(2, &rat(1), &rat(-1)), ratio(13, 2));
        // L_2^{(0)}(x) = 1 - 2x + x^2/2
        assert_eq!(laguerre(2, &rat(0), &rat(3)), ratio(1, 2) * rat(9) - rat(5));
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        // L_m^{(a)}(x) = sum_i (-1)^i C(m + a, m - i) x^i / i! for integer a
        for m in 0..8u32 {
            for a in 0..3i64 {
                let x = ratio(-3, 2);
                let explicit: Rational = (0..=m as i64)
                    .map(|i| {
                        let c = crate::exact::binomial(m as u64 + a as u64, m as i64 - i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        Rational::from_integer(c * sign) * rational_pow(&x, i as u64)
                            / Rational::from_integer(factorial(i as u64))
                    })
                    .sum();
                assert_eq!(laguerre(m, &rat(a), &x), explicit, "m={m} a={a}");
            }
        }
    }

    #[test]
    fn laguerre_identity_small_n() {
        for n in 1..=20 {
            assert!(laguerre_bell_check(n).unwrap(), "n = {n}");
        }
        assert!(laguerre_bell_check(0).is_err());
    }

    #[test]
    fn kummer_examples() {
        assert!(kummer_bell_check(1, 2, 256).unwrap());
        assert!(kummer_bell_check(1, 1, 256).unwrap());
        assert!(kummer_bell_check(2, 2, 256).unwrap());
        let v = kummer_bell(2, 4, 256).unwrap();
        assert!(v.tail_bound.to_rational() < pow2_neg(200) * v.value.to_rational());
    }

    #[test]
    fn family_examples() {
        assert!(family_bell_check(1, 1, 2, 256).unwrap());
        assert!(family_bell_check(1, 1, 1, 256).unwrap());
        assert!(family_bell_check(1, 2, 2, 256).unwrap());
        // (p, r) = (1, 2) is B_{3,2}: B_{3,2}(2) = 13
        assert!(family_bell(1, 2, 2, 128).unwrap().contains(&rat(13)));
    }

    #[test]
    fn family_prefactor_needs_p_equal_one() {
        // B_{4,2}(3) = 97: the (p(n-1)+j)! prefactor gives 3!/2! times the same rFr
        assert!(!family_bell_check(2, 1, 3, 128).unwrap());
        for p in 1..=3 {
            for r in 1..=3 {
                for n in 1..=3 {
                    assert!(
                        family_bell_general_check(p, r, n, 128).unwrap(),
                        "p={p} r={r} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn family_reduces_to_kummer() {
        for r in 1..=3 {
            for n in 1..=3 {
                let a = family_bell_general(r, 1, n, 128).unwrap();
                let b = kummer_bell(r, n, 128).unwrap();
                let diff = (a.value.to_rational() - b.value.to_rational()).abs();
                assert!(diff <= pow2_neg(100) * b.value.to_rational());
            }
        }
    }

    #[test]
    fn r1_hypergeometric_combinations() {
        for r in 2..=4 {
            for n in 1..=5 {
                assert!(
                    bell_r1_hypergeometric_check(r, n, 256).unwrap(),
                    "r={r} n={n}"
                );
            }
        }
        assert!(bell_r1_hypergeometric(5, 1, 64).is_err());
    }
}
