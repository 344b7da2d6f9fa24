//! Exact integer combinatorics: binomial coefficients with arbitrary integer
//! upper argument, their parity, and truncated power series in one variable.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("truncated series have different degree bounds ({left} vs {right})")]
    BoundMismatch { left: usize, right: usize },
    #[error("series is not invertible: constant term is {0}, expected 1")]
    NonUnitConstant(BigInt),
}

/// The generalized binomial coefficient `a (a-1) ... (a-k+1) / k!`.
///
/// Negative `a` is handled through the reflection
/// `binom(a, k) = (-1)^k binom(-a + k - 1, k)`.
pub fn binom_exact(a: i64, k: u64) -> BigInt {
    if a < 0 {
        let reflected = binom_nonneg((-(a as i128) + k as i128 - 1) as u128, k);
        if k % 2 == 1 {
            -reflected
        } else {
            reflected
        }
    } else {
        binom_nonneg(a as u128, k)
    }
}

fn binom_nonneg(a: u128, k: u64) -> BigInt {
    let k = k as u128;
    if k > a {
        return BigInt::zero();
    }
    let k = k.min(a - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = binom(a, i) here, so the division is exact.
        acc *= BigInt::from(a - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Parity of `binom(a, k)`, via Lucas' theorem for `a >= 0` and the
/// reflection identity for `a < 0` (the sign does not matter mod 2).
pub fn binom_mod2(a: i64, k: u64) -> u8 {
    let top = if a < 0 {
        (-(a as i128) + k as i128 - 1) as u128
    } else {
        a as u128
    };
    u8::from((k as u128) & !top == 0)
}

/// A power series `c_0 + c_1 h + ... + c_b h^b`; products drop every term of
/// degree above the bound `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coefficients: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(degree_bound: usize) -> Self {
        Self {
            coefficients: vec![BigInt::zero(); degree_bound + 1],
        }
    }

    pub fn one(degree_bound: usize) -> Self {
        let mut s = Self::zero(degree_bound);
        s.coefficients[0] = BigInt::one();
        s
    }

    /// Builds a series from its leading coefficients; missing ones are zero
    /// and coefficients past the bound are dropped.
    pub fn from_coefficients<I, T>(degree_bound: usize, coefficients: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(degree_bound);
        for (slot, c) in s.coefficients.iter_mut().zip(coefficients) {
            *slot = c.into();
        }
        s
    }

    /// `1 + c h`
    pub fn linear(degree_bound: usize, c: i64) -> Self {
        Self::from_coefficients(degree_bound, [1, c])
    }

    pub fn degree_bound(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_bound(other)?;
        let bound = self.degree_bound();
        let mut out = Self::zero(bound);
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coefficients[..=bound - i].iter().enumerate() {
                out.coefficients[i + k] += a * b;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.degree_bound());
        for _ in 0..exponent {
            acc = acc.mul(self).expect("bounds agree");
        }
        acc
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        if !self.coefficients[0].is_one() {
            return Err(ArithError::NonUnitConstant(self.coefficients[0].clone()));
        }
        let bound = self.degree_bound();
        let mut out = Self::one(bound);
        for k in 1..=bound {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                acc += &self.coefficients[i] * &out.coefficients[k - i];
            }
            out.coefficients[k] = -acc;
        }
        Ok(out)
    }

    fn check_bound(&self, other: &Self) -> Result<(), ArithError> {
        if self.degree_bound() != other.degree_bound() {
            return Err(ArithError::BoundMismatch {
                left: self.degree_bound(),
                right: other.degree_bound(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}h")?,
                _ => write!(f, "{c}h^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(h^{})", self.degree_bound() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Falling-factorial product divided by k!, straight from the definition.
    fn binom_by_product(a: i64, k: u64) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..k as i64 {
            num *= BigInt::from(a - i);
            den *= BigInt::from(i + 1);
        }
        num / den
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_exact(13, 5), BigInt::from(1287));
        assert_eq!(binom_mod2(13, 5), 1);
        for a in -20..20 {
            assert_eq!(binom_exact(a, 0), BigInt::one());
        }
        assert_eq!(binom_exact(-9, 3), BigInt::from(-165));
        assert_eq!(binom_exact(-9, 3), binom_by_product(-9, 3));
        assert_eq!(binom_exact(3, 5), BigInt::zero());
    }

    #[test]
    fn binom_matches_product_oracle() {
        for a in -40..=40 {
            for k in 0..=30 {
                assert_eq!(binom_exact(a, k), binom_by_product(a, k), "a={a} k={k}");
            }
        }
    }

    #[test]
    fn binom_beyond_u64() {
        // 200 choose 100 has 59 decimal digits.
        let v = binom_exact(200, 100);
        assert_eq!(v.to_string().len(), 59);
        assert_eq!(
            binom_mod2(200, 100),
            if (&v % 2u32).is_zero() { 0 } else { 1 }
        );
    }

    #[test]
    fn binom_mod2_examples() {
        assert_eq!(binom_mod2(5, 2), 0);
        assert_eq!(binom_mod2(-5, 1), 1);
        for t in 0..7u32 {
            let d = (1i64 << t) - 1;
            for i in 0..=d as u64 {
                assert_eq!(binom_mod2(d, i), 1);
            }
        }
    }

    #[test]
    fn lucas_agrees_with_exact() {
        for a in 0..=64i64 {
            for k in 0..=64u64 {
                let exact = binom_exact(a, k);
                let parity = u8::from(!(exact % 2u32).is_zero());
                assert_eq!(binom_mod2(a, k), parity, "a={a} k={k}");
            }
        }
        for a in -64..0i64 {
            for k in 0..=64u64 {
                let parity = u8::from(!(binom_exact(a, k) % 2u32).is_zero());
                assert_eq!(binom_mod2(a, k), parity, "a={a} k={k}");
            }
        }
    }

    #[test]
    fn pascal_and_reflection() {
        for a in -50..=50i64 {
            for k in 1..=25u64 {
                assert_eq!(
                    binom_exact(a, k),
                    binom_exact(a - 1, k) + binom_exact(a - 1, k - 1)
                );
            }
        }
        for a in 1..=50i64 {
            for k in 0..=25u64 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(binom_exact(-a, k), sign * binom_exact(a + k as i64 - 1, k));
            }
        }
    }

    #[test]
    fn series_examples() {
        let one_plus = TruncatedSeries::linear(2, 1);
        let one_minus = TruncatedSeries::linear(2, -1);
        assert_eq!(
            one_plus.mul(&one_minus).unwrap(),
            TruncatedSeries::from_coefficients(2, [1, 0, -1])
        );
        let p = TruncatedSeries::linear(1, 1);
        assert_eq!(
            p.mul(&p).unwrap(),
            TruncatedSeries::from_coefficients(1, [1, 2])
        );
        let a = TruncatedSeries::linear(2, 2);
        let b = TruncatedSeries::from_coefficients(2, [1, -5, 15]);
        assert_eq!(
            a.mul(&b).unwrap(),
            TruncatedSeries::from_coefficients(2, [1, -3, 5])
        );
    }

    #[test]
    fn series_inverse_examples() {
        assert_eq!(
            TruncatedSeries::one(4).inverse().unwrap(),
            TruncatedSeries::one(4)
        );
        assert_eq!(
            TruncatedSeries::linear(3, 1).inverse().unwrap(),
            TruncatedSeries::from_coefficients(3, [1, -1, 1, -1])
        );
        let fifth = TruncatedSeries::linear(2, 1).pow(5);
        let inv = fifth.inverse().unwrap();
        assert_eq!(inv, TruncatedSeries::from_coefficients(2, [1, -5, 15]));
        for i in 0..=2 {
            assert_eq!(inv.coefficient(i), binom_exact(-5, i as u64));
        }
    }

    #[test]
    fn series_errors() {
        let s = TruncatedSeries::from_coefficients(2, [2, 1]);
        assert_eq!(
            s.inverse(),
            Err(ArithError::NonUnitConstant(BigInt::from(2)))
        );
        let a = TruncatedSeries::one(2);
        let b = TruncatedSeries::one(3);
        assert_eq!(
            a.mul(&b),
            Err(ArithError::BoundMismatch { left: 2, right: 3 })
        );
    }

    fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
        (0usize..=16).prop_flat_map(|bound| {
            prop::collection::vec(-1000i64..1000, bound).prop_map(move |tail| {
                TruncatedSeries::from_coefficients(bound, std::iter::once(1).chain(tail))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn inverse_is_two_sided(s in unit_series()) {
            let inv = s.inverse().unwrap();
            let one = TruncatedSeries::one(s.degree_bound());
            prop_assert_eq!(s.mul(&inv).unwrap(), one.clone());
            prop_assert_eq!(inv.mul(&s).unwrap(), one);
        }
    }
}
