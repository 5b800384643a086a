//! Generalized Stirling numbers `S_{r,s}(n,k)` and Bell numbers `B_{r,s}(n)`.
//!
//! `S_{r,s}(n,k)` is the coefficient of `(a†)^k a^k` in the normally ordered
//! expansion of `[(a†)^r a^s]^n`, after pulling out `(a†)^{n(r-s)}` on the
//! left when `r >= s`, or `a^{n(s-r)}` on the right when `r < s`. The nonzero
//! band is `min(r,s) <= k <= n min(r,s)`.
//!
//! Several independent routes are provided so they can be checked against
//! each other: the alternating finite sum, the differential-operator form,
//! the diagonal recurrence, the conjugation symmetry and, for `r = 2, s = 1`,
//! the Lah closed form. Under the symmetry `S_{r,s} = S_{s,r}` the band for
//! `r <= s` is `r <= k <= nr`, not `s <= k <= ns`.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, falling_factorial_int, Rational};

/// Exponents of the word `(a†)^r a^s`; both positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    r: u32,
    s: u32,
}

impl Params {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::InvalidParams(format!(
                "r and s must be positive (got r={r}, s={s})"
            )));
        }
        Ok(Params { r, s })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn swapped(&self) -> Self {
        Params {
            r: self.s,
            s: self.r,
        }
    }

    /// `min(r, s)`, the lowest `k` carrying a nonzero entry.
    pub fn lower(&self) -> u32 {
        self.r.min(self.s)
    }

    pub fn is_diagonal(&self) -> bool {
        self.r == self.s
    }

    /// Range of `k` with nonzero `S_{r,s}(n,k)`; empty for `n = 0`.
    pub fn band(&self, n: u32) -> RangeInclusive<u32> {
        if n == 0 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        self.lower()..=n * self.lower()
    }

    fn require_r_ge_s(&self, what: &str) -> Result<()> {
        if self.r < self.s {
            return Err(Error::InvalidParams(format!(
                "{what} needs r >= s (got r={}, s={})",
                self.r, self.s
            )));
        }
        Ok(())
    }
}

/// The table `S_{r,s}(n,k)` for `1 <= n <= n_max`, stored band by band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTriangle {
    params: Params,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTriangle {
    /// Wraps precomputed rows; `rows[n-1]` lists the entries for `k` in `params.band(n)`.
    pub fn from_rows(params: Params, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let n = i as u32 + 1;
            let width = params.band(n).count();
            if row.len() != width {
                return Err(Error::InvalidParams(format!(
                    "row {n} has {} entries, band needs {width}",
                    row.len()
                )));
            }
        }
        Ok(StirlingTriangle { params, rows })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32
    }

    /// `S(n,k)`, zero outside the band; `S(0,0) = 1`.
    pub fn get(&self, n: u32, k: u32) -> BigInt {
        if n == 0 {
            return if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let band = self.params.band(n);
        match self.rows.get(n as usize - 1) {
            Some(row) if band.contains(&k) => row[(k - band.start()) as usize].clone(),
            _ => BigInt::zero(),
        }
    }

    /// `(k, S(n,k))` pairs across the band of row `n`.
    pub fn row(&self, n: u32) -> Vec<(u32, BigInt)> {
        if n == 0 || n > self.n_max() {
            return Vec::new();
        }
        self.params
            .band(n)
            .zip(self.rows[n as usize - 1].iter().cloned())
            .collect()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

/// `B_{r,s}(0..=n_max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellSequence {
    pub params: Params,
    pub values: Vec<BigInt>,
}

/// Alternating finite sum for `S_{r,s}(n,k)`, `r >= s`.
///
/// `(-1)^k / k! * sum_{p=s}^{k} (-1)^p C(k,p) prod_{j=1}^{n} (p + (j-1)(r-s))^{falling s}`.
/// The division by `k!` must be exact; a remainder is reported as an error.
pub fn stirling_explicit(p: Params, n: u32, k: u32) -> Result<BigInt> {
    p.require_r_ge_s("stirling_explicit")?;
    if n == 0 {
        return Ok(if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    if !p.band(n).contains(&k) {
        return Ok(BigInt::zero());
    }
    let (r, s) = (p.r as u64, p.s as u64);
    let mut sum = BigInt::zero();
    for q in s..=k as u64 {
        let mut prod = BigInt::one();
        for j in 1..=n as u64 {
            prod *= falling_factorial_int(&BigInt::from(q + (j - 1) * (r - s)), p.s);
        }
        let term = binomial(k as u64, q as i64) * prod;
        if q % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if k % 2 == 1 {
        sum = -sum;
    }
    let (quot, rem) = sum.div_rem(&factorial(k as u64));
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            r: p.r,
            s: p.s,
            n,
            k,
            sum: sum.to_string(),
        });
    }
    Ok(quot)
}

/// `S_{r,s}(n,k)` from `(-1)^k/k! [ (x^r d^s/dx^s)^n ((1-x)^k - sum_{p<s} C(k,p)(-x)^p) ]_{x=1}`.
pub fn stirling_diffop(p: Params, n: u32, k: u32) -> Result<BigInt> {
    p.require_r_ge_s("stirling_diffop")?;
    if n == 0 {
        return Ok(if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    // (1-x)^k with the first s terms removed: coefficients C(k,q)(-1)^q for q >= s.
    let mut poly: Vec<BigInt> = (0..=k as u64)
        .map(|q| {
            if q < p.s as u64 {
                BigInt::zero()
            } else if q % 2 == 0 {
                binomial(k as u64, q as i64)
            } else {
                -binomial(k as u64, q as i64)
            }
        })
        .collect();
    for _ in 0..n {
        poly = apply_x_power_derivative(&poly, p.r, p.s);
    }
    let at_one: BigInt = poly.iter().sum();
    let signed = if k % 2 == 1 { -at_one } else { at_one };
    let (quot, rem) = signed.div_rem(&factorial(k as u64));
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            r: p.r,
            s: p.s,
            n,
            k,
            sum: signed.to_string(),
        });
    }
    Ok(quot)
}

/// `x^r d^s/dx^s` on a dense coefficient vector.
fn apply_x_power_derivative(poly: &[BigInt], r: u32, s: u32) -> Vec<BigInt> {
    let degree = poly.len() as i64 - 1;
    let new_degree = (degree - s as i64 + r as i64).max(0) as usize;
    let mut out = vec![BigInt::zero(); new_degree + 1];
    for (m, c) in poly.iter().enumerate() {
        if c.is_zero() || (m as u32) < s {
            continue;
        }
        let target = m + r as usize - s as usize;
        out[target] += c * falling_factorial_int(&BigInt::from(m), s);
    }
    out
}

/// The `r = s` triangle built from `S_{r,r}(1,r) = 1` and
/// `S_{r,r}(n+1,k) = sum_{p=0}^{r} C(k+p-r, p) r^{falling p} S_{r,r}(n, k+p-r)`.
pub fn stirling_diag_recurrence(r: u32, n_max: u32) -> Result<StirlingTriangle> {
    let params = Params::new(r, r)?;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    if n_max == 0 {
        return StirlingTriangle::from_rows(params, rows);
    }
    rows.push(vec![BigInt::one()]);
    let r_falling: Vec<BigInt> = (0..=r)
        .map(|q| falling_factorial_int(&BigInt::from(r), q))
        .collect();
    for n in 1..n_max {
        let prev = &rows[n as usize - 1];
        let prev_at = |k: i64| -> BigInt {
            let lo = r as i64;
            let hi = (n * r) as i64;
            if k < lo || k > hi {
                BigInt::zero()
            } else {
                prev[(k - lo) as usize].clone()
            }
        };
        let row: Vec<BigInt> = params
            .band(n + 1)
            .map(|k| {
                (0..=r)
                    .map(|q| {
                        let idx = k as i64 + q as i64 - r as i64;
                        if idx < 0 {
                            return BigInt::zero();
                        }
                        binomial(idx as u64, q as i64) * &r_falling[q as usize] * prev_at(idx)
                    })
                    .sum()
            })
            .collect();
        rows.push(row);
    }
    StirlingTriangle::from_rows(params, rows)
}

/// `S_{r,s}(n,k)` for `r < s`, read through the conjugation symmetry as `S_{s,r}(n,k)`.
pub fn stirling_symmetric(p: Params, n: u32, k: u32) -> Result<BigInt> {
    if p.r >= p.s {
        return Err(Error::InvalidParams(format!(
            "stirling_symmetric needs r < s (got r={}, s={})",
            p.r, p.s
        )));
    }
    if n > 0 && !p.band(n).contains(&k) {
        return Ok(BigInt::zero());
    }
    stirling_explicit(p.swapped(), n, k)
}

/// Per-`(r,s)` memo of triangle rows, filled on demand.
#[derive(Default)]
pub struct StirlingCache {
    rows: RwLock<HashMap<Params, Vec<Vec<BigInt>>>>,
}

impl StirlingCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache.
    pub fn global() -> &'static StirlingCache {
        static CACHE: OnceLock<StirlingCache> = OnceLock::new();
        CACHE.get_or_init(StirlingCache::new)
    }

    /// The triangle for `p` through row `n_max`.
    pub fn triangle(&self, p: Params, n_max: u32) -> Result<StirlingTriangle> {
        // r < s shares storage with its mirror image
        let key = if p.r >= p.s { p } else { p.swapped() };
        {
            let read = self.rows.read().expect("cache lock poisoned");
            if let Some(rows) = read.get(&key) {
                if rows.len() >= n_max as usize {
                    return StirlingTriangle::from_rows(p, rows[..n_max as usize].to_vec());
                }
            }
        }
        let mut write = self.rows.write().expect("cache lock poisoned");
        let rows = write.entry(key).or_default();
        while rows.len() < n_max as usize {
            let n = rows.len() as u32 + 1;
            let row = key
                .band(n)
                .map(|k| stirling_explicit(key, n, k))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        StirlingTriangle::from_rows(p, rows[..n_max as usize].to_vec())
    }
}

/// `S_{r,s}(n,k)` for any positive `r, s`, memoized.
pub fn stirling(p: Params, n: u32, k: u32) -> Result<BigInt> {
    if n == 0 {
        return Ok(if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    Ok(StirlingCache::global().triangle(p, n)?.get(n, k))
}

/// Full triangle through row `n_max`.
pub fn triangle(p: Params, n_max: u32) -> Result<StirlingTriangle> {
    StirlingCache::global().triangle(p, n_max)
}

/// Anti-Stirling number through the shift identity `S_{r,s}(n+1, k+s)`, `r >= s`.
pub fn anti_stirling(p: Params, n: u32, k: u32) -> Result<BigInt> {
    p.require_r_ge_s("anti_stirling")?;
    if k > n * p.s {
        return Ok(BigInt::zero());
    }
    stirling(p, n + 1, k + p.s)
}

/// `B_{r,s}(n)`: the row sum, with `B_{r,s}(0) = 1`.
pub fn bell_number(p: Params, n: u32) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::one());
    }
    Ok(triangle(p, n)?.row(n).into_iter().map(|(_, v)| v).sum())
}

pub fn bell_sequence(p: Params, n_max: u32) -> Result<BellSequence> {
    let tri = triangle(p, n_max)?;
    let mut values = vec![BigInt::one()];
    for n in 1..=n_max {
        values.push(tri.row(n).into_iter().map(|(_, v)| v).sum());
    }
    Ok(BellSequence { params: p, values })
}

/// `B_{r,s}(n,t) = sum_k S_{r,s}(n,k) t^k`; equal to 1 at `n = 0`.
pub fn bell_polynomial(p: Params, n: u32, t: &Rational) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::one());
    }
    let tri = triangle(p, n)?;
    let mut acc = Rational::zero();
    for (k, v) in tri.row(n) {
        acc += Rational::from_integer(v) * crate::exact::rational_pow(t, k as u64);
    }
    Ok(acc)
}

/// Unsigned Lah number `n!/k! C(n-1, k-1)`.
pub fn lah_closed_form(n: u32, k: u32) -> Result<BigInt> {
    if k < 1 || k > n {
        return Err(Error::InvalidParams(format!(
            "lah_closed_form needs 1 <= k <= n (got n={n}, k={k})"
        )));
    }
    Ok(factorial(n as u64) / factorial(k as u64) * binomial(n as u64 - 1, k as i64 - 1))
}

/// Checks `prod_j (x + (j-1)(r-s))^{falling s} == sum_k S_{r,s}(n,k) x^{falling k}` at integer `x`.
pub fn connection_identity_check(p: Params, n: u32, x: i64) -> Result<bool> {
    let (lhs, rhs) = connection_identity_sides(p, n, x)?;
    Ok(lhs == rhs)
}

/// Both sides of the falling-factorial connection identity.
pub fn connection_identity_sides(p: Params, n: u32, x: i64) -> Result<(BigInt, BigInt)> {
    p.require_r_ge_s("connection_identity_check")?;
    if n == 0 {
        return Err(Error::InvalidParams(
            "connection identity needs n >= 1".into(),
        ));
    }
    let diff = (p.r - p.s) as i64;
    let lhs: BigInt = (1..=n as i64)
        .map(|j| falling_factorial_int(&BigInt::from(x + (j - 1) * diff), p.s))
        .product();
    let tri = triangle(p, n)?;
    let rhs: BigInt = tri
        .row(n)
        .into_iter()
        .map(|(k, v)| v * falling_factorial_int(&BigInt::from(x), k))
        .sum();
    Ok((lhs, rhs))
}

/// `B_{r,1}(0..=n_max)` from
/// `B(n+1) = sum_k C(n,k) [prod_{j=0}^{n-k} (r + (j-1)(r-1))] B(k)`.
pub fn bell_recurrence_r1(r: u32, n_max: u32) -> Result<BellSequence> {
    let params = Params::new(r, 1)?;
    let r = r as i64;
    // weight[m] = prod_{j=0}^{m} (r + (j-1)(r-1))
    let mut weight = Vec::with_capacity(n_max as usize + 1);
    let mut acc = BigInt::one();
    for j in 0..=n_max as i64 {
        acc *= r + (j - 1) * (r - 1);
        weight.push(acc.clone());
    }
    let mut values = vec![BigInt::one()];
    for n in 0..n_max as u64 {
        let next: BigInt = (0..=n)
            .map(|k| binomial(n, k as i64) * &weight[(n - k) as usize] * &values[k as usize])
            .sum();
        values.push(next);
    }
    Ok(BellSequence { params, values })
}

/// `B_{2,2}(n) = sum_{k=0}^{n-1} C(n-1,k) B_{1,1}(n+k)`, with the classical
/// Bell numbers taken from the binomial-transform recurrence.
pub fn bell_diag_from_classical(n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "bell_diag_from_classical needs n >= 1".into(),
        ));
    }
    let classical = bell_recurrence_r1(1, 2 * n - 1)?.values;
    Ok((0..n)
        .map(|k| binomial(n as u64 - 1, k as i64) * &classical[(n + k) as usize])
        .sum())
}

/// True when every entry inside the band is positive, the top entry is one,
/// and the row has the expected width.
pub fn row_is_well_formed(tri: &StirlingTriangle, n: u32) -> bool {
    let row = tri.row(n);
    let band = tri.params().band(n);
    row.len() == band.clone().count()
        && row.iter().all(|(_, v)| v.is_positive())
        && row.last().map(|(_, v)| v.is_one()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn p(r: u32, s: u32) -> Params {
        Params::new(r, s).unwrap()
    }

    /// Classical Stirling numbers by counting set partitions into exactly k blocks.
    fn set_partitions_into(n: usize, k: usize) -> u64 {
        fn rec(pos: usize, n: usize, used: usize, k: usize) -> u64 {
            if pos == n {
                return (used == k) as u64;
            }
            let join = used as u64 * rec(pos + 1, n, used, k);
            let open = if used < k {
                rec(pos + 1, n, used + 1, k)
            } else {
                0
            };
            join + open
        }
        rec(0, n, 0, k)
    }

    #[test]
    fn params_reject_zero() {
        assert!(Params::new(0, 1).is_err());
        assert!(Params::new(1, 0).is_err());
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(stirling_explicit(p(1, 1), 3, 2).unwrap(), BigInt::from(3));
        assert_eq!(set_partitions_into(3, 2), 3);
        assert_eq!(stirling_explicit(p(2, 1), 3, 2).unwrap(), BigInt::from(6));
        assert_eq!(stirling_explicit(p(2, 2), 2, 3).unwrap(), BigInt::from(4));
        assert_eq!(stirling_explicit(p(2, 2), 2, 5).unwrap(), BigInt::zero());
        assert_eq!(stirling_explicit(p(2, 2), 2, 1).unwrap(), BigInt::zero());
        assert!(stirling_explicit(p(1, 2), 2, 1).is_err());
    }

    #[test]
    fn explicit_matches_set_partitions() {
        for n in 1..=7u32 {
            for k in 1..=n {
                assert_eq!(
                    stirling_explicit(p(1, 1), n, k).unwrap(),
                    BigInt::from(set_partitions_into(n as usize, k as usize))
                );
            }
        }
    }

    #[test]
    fn diffop_examples() {
        assert_eq!(stirling_diffop(p(1, 1), 2, 1).unwrap(), BigInt::one());
        assert_eq!(stirling_diffop(p(1, 1), 3, 3).unwrap(), BigInt::one());
        assert_eq!(stirling_diffop(p(2, 1), 2, 2).unwrap(), BigInt::one());
    }

    #[test]
    fn diag_recurrence_rows() {
        let t = stirling_diag_recurrence(2, 2).unwrap();
        assert_eq!(t.row(1), vec![(2, BigInt::one())]);
        assert_eq!(
            t.row(2),
            vec![
                (2, BigInt::from(2)),
                (3, BigInt::from(4)),
                (4, BigInt::one())
            ]
        );
        // r = 1 reduces to S(n+1,k) = k S(n,k) + S(n,k-1)
        let c = stirling_diag_recurrence(1, 8).unwrap();
        for n in 1..8 {
            for k in 1..=n + 1 {
                assert_eq!(
                    c.get(n + 1, k),
                    BigInt::from(k) * c.get(n, k) + c.get(n, k - 1)
                );
            }
        }
        assert_eq!(stirling_diag_recurrence(3, 0).unwrap().n_max(), 0);
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(stirling_symmetric(p(1, 2), 2, 2).unwrap(), BigInt::one());
        assert_eq!(stirling_symmetric(p(1, 2), 1, 1).unwrap(), BigInt::one());
        assert_eq!(
            stirling_symmetric(p(2, 3), 2, 3).unwrap(),
            stirling_explicit(p(3, 2), 2, 3).unwrap()
        );
        assert!(stirling_symmetric(p(2, 1), 1, 1).is_err());
        // band for r < s is r..=nr
        assert_eq!(p(1, 3).band(2), 1..=2);
        assert_eq!(stirling(p(1, 3), 2, 3).unwrap(), BigInt::zero());
    }

    #[test]
    fn anti_stirling_examples() {
        assert_eq!(anti_stirling(p(1, 1), 1, 0).unwrap(), BigInt::one());
        assert_eq!(anti_stirling(p(1, 1), 1, 1).unwrap(), BigInt::one());
        assert_eq!(anti_stirling(p(2, 1), 1, 0).unwrap(), BigInt::from(2));
        assert_eq!(anti_stirling(p(1, 1), 2, 2).unwrap(), BigInt::one());
        assert_eq!(anti_stirling(p(1, 1), 2, 3).unwrap(), BigInt::zero());
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(bell_number(p(1, 1), 3).unwrap(), BigInt::from(5));
        assert_eq!(bell_number(p(2, 1), 3).unwrap(), BigInt::from(13));
        assert_eq!(bell_number(p(2, 2), 2).unwrap(), BigInt::from(7));
        assert_eq!(bell_number(p(3, 2), 0).unwrap(), BigInt::one());
        let seq = bell_sequence(p(1, 1), 5).unwrap();
        let expected: Vec<BigInt> = [1, 1, 2, 5, 15, 52]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(seq.values, expected);
    }

    #[test]
    fn bell_polynomial_examples() {
        assert_eq!(bell_polynomial(p(1, 1), 2, &rat(1)).unwrap(), rat(2));
        assert_eq!(
            bell_polynomial(p(1, 1), 2, &ratio(1, 2)).unwrap(),
            ratio(3, 4)
        );
        assert_eq!(bell_polynomial(p(2, 2), 2, &rat(2)).unwrap(), rat(56));
        assert_eq!(bell_polynomial(p(2, 2), 0, &rat(5)).unwrap(), rat(1));
    }

    #[test]
    fn lah_examples() {
        assert_eq!(lah_closed_form(3, 2).unwrap(), BigInt::from(6));
        assert_eq!(lah_closed_form(4, 1).unwrap(), BigInt::from(24));
        for n in 1..10 {
            assert_eq!(lah_closed_form(n, n).unwrap(), BigInt::one());
        }
        assert!(lah_closed_form(3, 0).is_err());
    }

    #[test]
    fn connection_identity_examples() {
        assert_eq!(
            connection_identity_sides(p(1, 1), 3, 4).unwrap(),
            (BigInt::from(64), BigInt::from(64))
        );
        assert_eq!(
            connection_identity_sides(p(2, 2), 2, 2).unwrap(),
            (BigInt::from(4), BigInt::from(4))
        );
        for (r, s) in [(1, 1), (2, 1), (3, 2), (3, 3)] {
            assert_eq!(
                connection_identity_sides(p(r, s), 3, 0).unwrap(),
                (BigInt::zero(), BigInt::zero())
            );
        }
        for x in -5..12 {
            assert!(connection_identity_check(p(3, 1), 4, x).unwrap());
        }
    }

    #[test]
    fn bell_recurrence_examples() {
        let classical = bell_recurrence_r1(1, 6).unwrap().values;
        let expected: Vec<BigInt> = [1, 1, 2, 5, 15, 52, 203]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(classical, expected);
        let lah = bell_recurrence_r1(2, 3).unwrap().values;
        assert_eq!(lah[2], BigInt::from(3));
        assert_eq!(lah[3], BigInt::from(13));
    }

    #[test]
    fn bell_diag_examples() {
        assert_eq!(bell_diag_from_classical(1).unwrap(), BigInt::one());
        assert_eq!(bell_diag_from_classical(2).unwrap(), BigInt::from(7));
        assert_eq!(bell_diag_from_classical(3).unwrap(), BigInt::from(87));
        assert_eq!(bell_number(p(2, 2), 3).unwrap(), BigInt::from(87));
    }

    #[test]
    fn triangle_from_rows_checks_width() {
        assert!(
            StirlingTriangle::from_rows(p(2, 1), vec![vec![BigInt::one(), BigInt::one()]]).is_err()
        );
    }

    #[test]
    fn cache_is_shared_between_threads() {
        let cache = std::sync::Arc::new(StirlingCache::new());
        let handles: Vec<_> = (1..=4u32)
            .map(|n| {
                let cache = cache.clone();
                std::thread::spawn(move || cache.triangle(p(3, 2), n + 2).unwrap())
            })
            .collect();
        let tris: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for t in &tris {
            for n in 1..=t.n_max() {
                assert!(row_is_well_formed(t, n));
                assert_eq!(t.row(n), tris[3].row(n));
            }
        }
    }
}
