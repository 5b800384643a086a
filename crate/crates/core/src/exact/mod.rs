//! Exact arithmetic substrate.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`; this module
//! adds the combinatorial primitives used everywhere else, a binary
//! floating-point type with explicit precision ([`BigFloat`]), and truncated
//! formal power series over the rationals ([`PowerSeries`]).

mod float;
mod series;

pub use float::{BigFloat, DEFAULT_PRECISION};
pub use series::{series_binomial_power, series_exp, PowerSeries};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, m| acc * m)
}

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by i + 1 at this point
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Falling factorial `x (x-1) ... (x-s+1)`, equal to 1 for `s = 0`.
pub fn falling_factorial(x: &Rational, s: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..s {
        acc *= &term;
        term -= Rational::one();
    }
    acc
}

/// Integer falling factorial `m (m-1) ... (m-s+1)`.
pub fn falling_factorial_int(m: &BigInt, s: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = m.clone();
    for _ in 0..s {
        acc *= &term;
        term -= 1;
    }
    acc
}

/// Pochhammer symbol `(x)_n = x (x+1) ... (x+n-1)`.
pub fn rising_factorial(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// `x^n` for a rational base.
pub fn rational_pow(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// `2^-bits` as an exact rational.
pub fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_small_and_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        for n in 0..12 {
            assert_eq!(binomial(n, 0), BigInt::one());
            assert_eq!(binomial(n, -1), BigInt::zero());
            assert_eq!(binomial(n, n as i64 + 1), BigInt::zero());
        }
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let rows = pascal(30);
        assert_eq!(rows[30][15], BigInt::from(155_117_520u64));
        for (n, row) in rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, k as i64), v);
            }
        }
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&rat(5), 3), rat(60));
        assert_eq!(falling_factorial(&ratio(7, 3), 0), rat(1));
        assert_eq!(falling_factorial(&ratio(3, 2), 2), ratio(3, 4));
        assert_eq!(falling_factorial_int(&BigInt::from(2), 3), BigInt::zero());
    }

    #[test]
    fn rising_factorial_basics() {
        assert_eq!(rising_factorial(&rat(1), 5), rat(120));
        assert_eq!(rising_factorial(&ratio(1, 2), 2), ratio(3, 4));
    }

    proptest! {
        #[test]
        fn rational_is_normalized(p in -10_000i64..10_000, q in 1i64..10_000, neg in any::<bool>()) {
            let q = if neg { -q } else { q };
            let x = ratio(p, q);
            prop_assert!(x.denom() > &BigInt::zero());
            let g = num_integer::Integer::gcd(x.numer(), x.denom());
            prop_assert_eq!(g, BigInt::one());
        }

        #[test]
        fn falling_factorial_is_factorial_ratio(m in 0u64..40, s in 0u32..40) {
            prop_assume!(s as u64 <= m);
            let lhs = falling_factorial(&rat(m as i64), s);
            let rhs = Rational::new(factorial(m), factorial(m - s as u64));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
