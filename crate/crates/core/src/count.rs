//! Arbitrary-precision counts and the exact-to-float bridge.
//!
//! Every enumeration result lives in a [`Count`]. Probabilities such as
//! `S(n, m, k) / n^m` are formed by [`ratio_to_f64`], which divides the two
//! integers after aligning them to a 128-bit quotient window. Converting each
//! operand to `f64` separately would overflow the exponent range once `n^n`
//! passes roughly `2^1024` (around `n = 144`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, ParseBigIntError, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Nonnegative arbitrary-precision count.
///
/// Serializes as a decimal string, never as a float.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

/// Signed arbitrary-precision integer used for alternating sums.
pub type SignedCount = BigInt;

impl Count {
    pub const ZERO: Count = Count(BigUint::ZERO);

    pub fn new(value: BigUint) -> Self {
        Count(value)
    }

    pub fn one() -> Self {
        Count(BigUint::from(1u8))
    }

    /// `base^exp` with `0^0 = 1`.
    pub fn pow(base: u64, exp: u32) -> Self {
        Count(BigUint::from(base).pow(exp))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// `self - rhs`, or `None` if the result would be negative.
    pub fn checked_sub(&self, rhs: &Count) -> Option<Count> {
        if self.0 >= rhs.0 {
            Some(Count(&self.0 - &rhs.0))
        } else {
            None
        }
    }

    /// `self / denominator` as a float. See [`ratio_to_f64`].
    pub fn ratio(&self, denominator: &Count) -> f64 {
        ratio_to_f64(&self.0, &denominator.0)
    }

    /// Number of decimal digits.
    pub fn decimal_digits(&self) -> usize {
        self.0.to_str_radix(10).len()
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl TryFrom<BigInt> for Count {
    type Error = BigInt;

    fn try_from(v: BigInt) -> Result<Self, BigInt> {
        match v.to_biguint() {
            Some(u) => Ok(Count(u)),
            None => Err(v),
        }
    }
}

impl From<Count> for BigInt {
    fn from(c: Count) -> Self {
        BigInt::from_biguint(Sign::Plus, c.0)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Count {
    type Err = ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(Count)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for &'a Count {
    type Output = Count;
    fn add(self, rhs: &'a Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Count> for Count {
    fn add_assign(&mut self, rhs: &Count) {
        self.0 += &rhs.0;
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &'a Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl std::iter::Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Self {
        iter.fold(Count::ZERO, |acc, c| acc + c)
    }
}

impl<'a> std::iter::Sum<&'a Count> for Count {
    fn sum<I: Iterator<Item = &'a Count>>(iter: I) -> Self {
        iter.fold(Count::ZERO, |mut acc, c| {
            acc += c;
            acc
        })
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(de::Error::custom(format!("invalid count {s:?}")));
        }
        s.parse().map_err(de::Error::custom)
    }
}

/// Width of the quotient window used by [`ratio_to_f64`].
const QUOTIENT_BITS: u64 = 128;

/// `numerator / denominator` as an `f64`, computed without converting either
/// operand to floating point.
///
/// The numerator is shifted so that the integer quotient carries about 128
/// significant bits; a nonzero remainder is folded in as a sticky bit before
/// the final rounding. The result then gets rescaled by the shift.
///
/// Panics if `denominator` is zero.
pub fn ratio_to_f64(numerator: &BigUint, denominator: &BigUint) -> f64 {
    assert!(!denominator.is_zero(), "ratio with zero denominator");
    if numerator.is_zero() {
        return 0.0;
    }
    let shift = QUOTIENT_BITS as i64 + denominator.bits() as i64 - numerator.bits() as i64;
    let (q, r) = if shift >= 0 {
        let num = numerator << (shift as u64);
        (&num / denominator, &num % denominator)
    } else {
        let den = denominator << (shift.unsigned_abs());
        (numerator / &den, numerator % &den)
    };
    let q = if r.is_zero() {
        q
    } else {
        q | BigUint::from(1u8)
    };
    scale_by_pow2(biguint_to_f64(&q), -shift)
}

/// Signed variant of [`ratio_to_f64`].
pub fn signed_ratio_to_f64(numerator: &BigInt, denominator: &BigUint) -> f64 {
    let magnitude = ratio_to_f64(numerator.magnitude(), denominator);
    match numerator.sign() {
        Sign::Minus => -magnitude,
        _ => magnitude,
    }
}

// Correctly rounded conversion for values up to ~2^130: keep the top 64 bits,
// fold the rest into a sticky bit, then let the u64 -> f64 cast round.
fn biguint_to_f64(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().expect("fits in u64") as f64;
    }
    let drop = bits - 64;
    let top = (v >> drop).to_u64().expect("fits in u64");
    let sticky = !(v & ((BigUint::from(1u8) << drop) - 1u8)).is_zero();
    // The lowest bit of `top` is far below f64 precision, so OR-ing in the
    // sticky bit only breaks round-to-even ties in the right direction.
    let top = top | u64::from(sticky);
    scale_by_pow2(top as f64, drop as i64)
}

fn scale_by_pow2(mut x: f64, mut exp: i64) -> f64 {
    const STEP: i64 = 1000;
    while exp > STEP {
        x *= 2f64.powi(STEP as i32);
        exp -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while exp < -STEP {
        x *= 2f64.powi(-STEP as i32);
        exp += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(exp as i32)
}

/// Row `m` of Pascal's triangle, `C(m, 0..=m)`.
///
/// Built left to right with the exact step `C(m, i+1) = C(m, i) * (m - i) / (i + 1)`.
pub fn binomial_row(m: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigUint::from(1u8);
    row.push(c.clone());
    for i in 0..m {
        c = c * (m - i) / (i + 1);
        row.push(c.clone());
    }
    row
}

/// Pascal's triangle with rows `0..=max_row`, built by repeated addition.
pub fn pascal_triangle(max_row: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_row + 1);
    for n in 0..=max_row {
        let mut row = Vec::with_capacity(n + 1);
        row.push(BigUint::from(1u8));
        for i in 1..n {
            let prev = &rows[n - 1];
            row.push(&prev[i - 1] + &prev[i]);
        }
        if n > 0 {
            row.push(BigUint::from(1u8));
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ratio_of_small_values_matches_float_division() {
        let cases = [
            (1u64, 3u64),
            (2, 3),
            (125, 256),
            (7, 8),
            (0, 5),
            (10, 10),
            (1, 1 << 60),
        ];
        for (a, b) in cases {
            let got = ratio_to_f64(&BigUint::from(a), &BigUint::from(b));
            assert_eq!(got, a as f64 / b as f64, "{a}/{b}");
        }
    }

    #[test]
    fn ratio_survives_huge_operands() {
        // 101^99 / 100^100 = 0.01 * 1.01^99
        let num = BigUint::from(101u32).pow(99);
        let den = BigUint::from(100u32).pow(100);
        let expected = 0.01 * 1.01f64.powi(99);
        assert!((ratio_to_f64(&num, &den) - expected).abs() < 1e-15);

        // Both operands far beyond f64 range.
        let num = BigUint::from(3u32).pow(5000);
        let den = BigUint::from(3u32).pow(4999) * 7u32;
        assert!((ratio_to_f64(&num, &den) - 3.0 / 7.0).abs() < 1e-16);
    }

    #[test]
    fn ratio_handles_extreme_exponents() {
        let tiny = ratio_to_f64(&BigUint::from(1u8), &(BigUint::from(1u8) << 1100u32));
        assert_eq!(tiny, 0.0);
        let sub = ratio_to_f64(&BigUint::from(1u8), &(BigUint::from(1u8) << 1060u32));
        assert_eq!(sub, 2f64.powi(-1060));
        let big = ratio_to_f64(&(BigUint::from(1u8) << 2000u32), &BigUint::from(1u8));
        assert!(big.is_infinite());
    }

    #[test]
    fn signed_ratio_keeps_sign() {
        let num = BigInt::from(-3);
        assert_eq!(signed_ratio_to_f64(&num, &BigUint::from(4u8)), -0.75);
    }

    #[test]
    fn binomial_rows_agree_with_triangle() {
        let tri = pascal_triangle(30);
        for m in 0..=30u32 {
            assert_eq!(binomial_row(m), tri[m as usize]);
        }
        assert_eq!(
            binomial_row(4),
            [1u8, 4, 6, 4, 1].map(BigUint::from).to_vec()
        );
    }

    #[test]
    fn count_zero_pow_zero_is_one() {
        assert_eq!(Count::pow(0, 0), Count::one());
        assert_eq!(Count::pow(0, 3), Count::ZERO);
    }

    #[test]
    fn deserialize_rejects_non_decimal() {
        assert!(serde_json::from_str::<Count>("\"-1\"").is_err());
        assert!(serde_json::from_str::<Count>("\"1e3\"").is_err());
        assert!(serde_json::from_str::<Count>("12").is_err());
        assert_eq!(
            serde_json::from_str::<Count>("\"12\"").unwrap(),
            Count::from(12)
        );
    }

    proptest! {
        #[test]
        fn decimal_round_trip(digits in "[1-9][0-9]{0,80}") {
            let c: Count = digits.parse().unwrap();
            prop_assert_eq!(c.to_string(), digits.clone());
            let json = serde_json::to_string(&c).unwrap();
            prop_assert_eq!(serde_json::from_str::<Count>(&json).unwrap(), c);
        }

        #[test]
        fn ratio_close_to_float_division(a in 0u64..(1 << 52), b in 1u64..(1 << 52), s in 0u32..3000) {
            let got = ratio_to_f64(&(BigUint::from(a) << s), &(BigUint::from(b) << s));
            let want = a as f64 / b as f64;
            prop_assert!((got - want).abs() <= want * 2.0 * f64::EPSILON);
        }
    }
}
