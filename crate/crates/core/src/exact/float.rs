use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Binary floating-point number `mantissa * 2^exponent` whose mantissa is
/// rounded to at most `precision` bits after every operation.
///
/// Every rounding is to nearest, so each operation carries a relative error of
/// at most `2^-precision`. Binary operations work at the larger of the two
/// operand precisions.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn round_mantissa(mantissa: BigInt, exponent: i64, precision: u32) -> (BigInt, i64) {
    let bits = mantissa.bits();
    if bits <= precision as u64 {
        if mantissa.is_zero() {
            return (mantissa, 0);
        }
        return (mantissa, exponent);
    }
    let mut shift = bits - precision as u64;
    let negative = mantissa.is_negative();
    let magnitude = mantissa.magnitude().clone();
    let half = num_bigint::BigUint::one() << (shift - 1) as usize;
    let mut rounded = (magnitude + half) >> shift as usize;
    if rounded.bits() > precision as u64 {
        rounded >>= 1;
        shift += 1;
    }
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    (BigInt::from_biguint(sign, rounded), exponent + shift as i64)
}

impl BigFloat {
    fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Self {
        assert!(precision >= 2, "precision must be at least 2 bits");
        let (mantissa, exponent) = round_mantissa(mantissa, exponent, precision);
        BigFloat {
            mantissa,
            exponent,
            precision,
        }
    }

    pub fn zero(precision: u32) -> Self {
        Self::from_parts(BigInt::zero(), 0, precision)
    }

    pub fn one(precision: u32) -> Self {
        Self::from_parts(BigInt::one(), 0, precision)
    }

    pub fn from_int(value: &BigInt, precision: u32) -> Self {
        Self::from_parts(value.clone(), 0, precision)
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        Self::from_parts(BigInt::from(value), 0, precision)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(value: &Rational, precision: u32) -> Self {
        let num = value.numer();
        let den = value.denom();
        if num.is_zero() {
            return Self::zero(precision);
        }
        // Scale so the quotient carries precision + 2 bits, then a sticky bit.
        let shift = precision as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let (scaled_num, scaled_den) = if shift >= 0 {
            (num.magnitude() << shift as usize, den.magnitude().clone())
        } else {
            (
                num.magnitude().clone(),
                den.magnitude() << (-shift) as usize,
            )
        };
        let (q, rem) = scaled_num.div_rem(&scaled_den);
        let sticky = if rem.is_zero() { 0u32 } else { 1u32 };
        let q = (q << 1usize) + sticky;
        let sign = if num.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        Self::from_parts(BigInt::from_biguint(sign, q), -shift - 1, precision)
    }

    /// Nearest representable value to an `f64`.
    pub fn from_f64(value: f64, precision: u32) -> Self {
        let exact = Rational::from_float(value).expect("finite f64");
        Self::from_rational(&exact, precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same value rounded to a different precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::from_parts(self.mantissa.clone(), self.exponent, precision)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa >> drop as usize)
            .to_f64()
            .unwrap_or(f64::NAN);
        let exp = self.exponent + drop;
        top * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    /// Position of the most significant bit, i.e. `floor(log2 |x|)`.
    fn top_bit(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64 - 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.max(other.precision);
        if self.is_zero() {
            return other.with_precision(precision);
        }
        if other.is_zero() {
            return self.with_precision(precision);
        }
        let (big, small) = if self.top_bit() >= other.top_bit() {
            (self, other)
        } else {
            (other, self)
        };
        // An operand far below the last bit of the other only moves the
        // result by less than half an ulp; keep it as a sticky bit.
        let gap = big.top_bit() - small.top_bit();
        if gap > precision as i64 + 4 {
            let widen = (precision as i64 + 4 - big.mantissa.bits() as i64).max(0) + 1;
            let mantissa = (&big.mantissa << widen as usize) + small.mantissa.signum();
            return Self::from_parts(mantissa, big.exponent - widen, precision);
        }
        let exponent = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - exponent) as usize;
        let b = &other.mantissa << (other.exponent - exponent) as usize;
        Self::from_parts(a + b, exponent, precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let precision = self.precision.max(other.precision);
        Self::from_parts(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            precision,
        )
    }

    pub fn mul_int(&self, other: &BigInt) -> Self {
        Self::from_parts(&self.mantissa * other, self.exponent, self.precision)
    }

    /// Quotient; panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let precision = self.precision.max(other.precision);
        if self.is_zero() {
            return Self::zero(precision);
        }
        let shift =
            precision as i64 + 2 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64;
        let shift = shift.max(0);
        let num = self.mantissa.magnitude() << shift as usize;
        let (q, rem) = num.div_rem(other.mantissa.magnitude());
        let sticky = if rem.is_zero() { 0u32 } else { 1u32 };
        let q = (q << 1usize) + sticky;
        let negative = self.is_negative() != other.is_negative();
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Self::from_parts(
            BigInt::from_biguint(sign, q),
            self.exponent - other.exponent - shift - 1,
            precision,
        )
    }

    /// Square root; panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat sqrt of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * self.precision as i64 + 4;
        let mut shift = (want - self.mantissa.bits() as i64).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = self.mantissa.magnitude() << shift as usize;
        let root = scaled.sqrt();
        let sticky = if &root * &root == scaled { 0u32 } else { 1u32 };
        let root = (root << 1usize) + sticky;
        Self::from_parts(
            BigInt::from_biguint(Sign::Plus, root),
            (self.exponent - shift) / 2 - 1,
            self.precision,
        )
    }

    /// `e^x`, by halving the argument, summing the Taylor series with guard
    /// bits, and squaring back.
    pub fn exp(&self) -> Self {
        let precision = self.precision;
        if self.is_zero() {
            return Self::one(precision);
        }
        let halvings = (self.top_bit() + 8).max(0) as u32;
        let work = precision + 2 * halvings + 32;
        let reduced =
            BigFloat::from_parts(self.mantissa.clone(), self.exponent - halvings as i64, work);
        let mut sum = BigFloat::one(work);
        let mut term = BigFloat::one(work);
        let threshold = -(work as i64) - 2;
        for k in 1u64.. {
            term = term.mul(&reduced).div(&BigFloat::from_i64(k as i64, work));
            if term.is_zero() || term.top_bit() < threshold {
                break;
            }
            sum = sum.add(&term);
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        sum.with_precision(precision)
    }

    /// `2^bits` as a float.
    pub fn pow2(bits: i64, precision: u32) -> Self {
        Self::from_parts(BigInt::one(), bits, precision)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let value = self.to_rational();
        let magnitude = value.abs();
        // Estimate the decimal exponent from the binary one, then correct.
        let mut exp10 = ((self.top_bit() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let pow10 = |e: i64| -> Rational {
            let p = Rational::from_integer(num_traits::pow(
                BigInt::from(10),
                e.unsigned_abs() as usize,
            ));
            if e >= 0 {
                p
            } else {
                p.recip()
            }
        };
        while magnitude >= pow10(exp10 + 1) {
            exp10 += 1;
        }
        while magnitude < pow10(exp10) {
            exp10 -= 1;
        }
        let scaled = &magnitude * pow10(digits as i64 - 1 - exp10);
        let mut int = (scaled + Rational::new(BigInt::one(), BigInt::from(2)))
            .floor()
            .to_integer();
        if int >= num_traits::pow(BigInt::from(10), digits) {
            int /= 10;
            exp10 += 1;
        }
        let text = int.to_string();
        let sign = if value.is_negative() { "-" } else { "" };
        if (-7..21).contains(&exp10) {
            if exp10 >= 0 {
                let split = exp10 as usize + 1;
                if split >= text.len() {
                    let pad = "0".repeat(split - text.len());
                    return format!("{sign}{text}{pad}");
                }
                let (head, tail) = text.split_at(split);
                let tail = tail.trim_end_matches('0');
                if tail.is_empty() {
                    format!("{sign}{head}")
                } else {
                    format!("{sign}{head}.{tail}")
                }
            } else {
                let zeros = "0".repeat((-exp10 - 1) as usize);
                format!("{sign}0.{zeros}{}", text.trim_end_matches('0'))
            }
        } else {
            let (head, tail) = text.split_at(1);
            let tail = tail.trim_end_matches('0');
            if tail.is_empty() {
                format!("{sign}{head}e{exp10}")
            } else {
                format!("{sign}{head}.{tail}e{exp10}")
            }
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl BigFloat {
    /// Numeric comparison, ignoring precision.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize);
        f.write_str(&self.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn close(a: &BigFloat, b: &Rational, rel_bits: u32) -> bool {
        let diff = (a.to_rational() - b).abs();
        let scale = b.abs().max(Rational::one());
        diff <= scale * crate::exact::pow2_neg(rel_bits)
    }

    #[test]
    fn exact_small_values_round_trip() {
        let x = BigFloat::from_rational(&ratio(3, 4), 64);
        assert_eq!(x.to_rational(), ratio(3, 4));
        assert_eq!(BigFloat::from_i64(-5, 8).to_rational(), rat(-5));
    }

    #[test]
    fn one_third_is_correctly_rounded() {
        let x = BigFloat::from_rational(&ratio(1, 3), 10);
        // 2048/3 = 682.67, so the nearest 10-bit mantissa is 683 * 2^-11
        assert_eq!(x.to_rational(), ratio(683, 2048));
    }

    #[test]
    fn sqrt_two_to_256_bits() {
        let two = BigFloat::from_i64(2, 256);
        let r = two.sqrt();
        let sq = r.mul(&r);
        assert!(close(&sq, &rat(2), 250));
        assert_eq!(&r.to_decimal_string(30), "1.41421356237309504880168872421");
    }

    #[test]
    fn exp_one_matches_series() {
        let e = BigFloat::one(256).exp();
        let mut sum = Rational::zero();
        let mut term = Rational::one();
        for k in 1..80 {
            sum += &term;
            term /= BigInt::from(k);
        }
        assert!(close(&e, &sum, 250));
        let back = BigFloat::from_i64(-3, 256)
            .exp()
            .mul(&BigFloat::from_i64(3, 256).exp());
        assert!(close(&back, &rat(1), 245));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_i64(5, 64).to_string(), "5");
        assert_eq!(
            BigFloat::from_rational(&ratio(-1, 8), 64).to_decimal_string(5),
            "-0.125"
        );
        assert_eq!(BigFloat::from_i64(12345, 64).to_decimal_string(3), "12300");
        let tiny = BigFloat::pow2(-200, 64);
        assert_eq!(tiny.to_decimal_string(3), "6.22e-61");
    }

    #[test]
    fn far_apart_addition_keeps_larger() {
        let a = BigFloat::one(64);
        let b = BigFloat::pow2(-1000, 64);
        assert_eq!(a.add(&b).to_rational(), rat(1));
        assert_eq!(a.sub(&b).to_rational(), rat(1));
    }

    proptest! {
        #[test]
        fn arithmetic_within_half_ulp(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000, c in -1000i64..1000) {
            let prec = 53;
            let x = ratio(a, b);
            let y = rat(c);
            let fx = BigFloat::from_rational(&x, prec);
            let fy = BigFloat::from_rational(&y, prec);
            prop_assert!(close(&fx, &x, prec));
            prop_assert!(close(&fx.mul(&fy), &(&x * &y), prec - 2));
            prop_assert!(close(&fx.add(&fy), &(&x + &y), prec - 2) || (&x + &y).is_zero());
            if c != 0 {
                prop_assert!(close(&fx.div(&fy), &(&x / &y), prec - 2));
            }
        }
    }
}
