//! Exact elements of `Q` and of a real quadratic field `Q(√d)`.
//!
//! A [`Scalar`] is stored as `rat + quad·√d`. The radicand is only carried
//! while the `√d` coefficient is nonzero, so the representation is canonical
//! and structural equality coincides with equality of real numbers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible ambient fields Q(√{left}) and Q(√{right})")]
    IncompatibleAmbientField { left: u64, right: u64 },
    #[error("radicand {0} is not a squarefree integer >= 2")]
    InvalidRadicand(u64),
}

/// Returns true when `d >= 2` and no square of a prime divides `d`.
pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    quad: BigRational,
    radicand: Option<u64>,
}

impl Scalar {
    pub fn new(rat: BigRational, quad: BigRational, radicand: Option<u64>) -> Result<Self, ScalarError> {
        if quad.is_zero() {
            return Ok(Self::rational(rat));
        }
        match radicand {
            Some(d) if is_squarefree(d) => Ok(Scalar { rat, quad, radicand: Some(d) }),
            Some(d) => Err(ScalarError::InvalidRadicand(d)),
            None => Err(ScalarError::InvalidRadicand(0)),
        }
    }

    pub fn rational(rat: BigRational) -> Self {
        Scalar { rat, quad: BigRational::zero(), radicand: None }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `num/den` as a rational scalar. Panics if `den` is zero.
    pub fn from_ratio<T: Into<BigInt>>(num: T, den: T) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    /// The positive square root of `d`.
    pub fn sqrt(d: u64) -> Result<Self, ScalarError> {
        Self::new(BigRational::zero(), BigRational::one(), Some(d))
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn quad(&self) -> &BigRational {
        &self.quad
    }

    /// `Some(d)` when the value is irrational, `None` for rationals.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.quad.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rat.is_integer()
    }

    fn common_radicand(&self, other: &Scalar) -> Result<Option<u64>, ScalarError> {
        match (self.radicand, other.radicand) {
            (Some(a), Some(b)) if a != b => Err(ScalarError::IncompatibleAmbientField { left: a, right: b }),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn build(rat: BigRational, quad: BigRational, radicand: Option<u64>) -> Self {
        if quad.is_zero() {
            Self::rational(rat)
        } else {
            Scalar { rat, quad, radicand }
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.rat + &other.rat, &self.quad + &other.quad, d))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.rat - &other.rat, &self.quad - &other.quad, d))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.common_radicand(other)?;
        let dd = BigRational::from_integer(BigInt::from(d.unwrap_or(0)));
        let rat = &self.rat * &other.rat + &self.quad * &other.quad * dd;
        let quad = &self.rat * &other.quad + &self.quad * &other.rat;
        Ok(Self::build(rat, quad, d))
    }

    /// `rat² - quad²·d`, the field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.radicand.unwrap_or(0)));
        &self.rat * &self.rat - &self.quad * &self.quad * d
    }

    pub fn conjugate(&self) -> Scalar {
        Self::build(self.rat.clone(), -&self.quad, self.radicand)
    }

    pub fn checked_inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::build(&self.rat / &n, -&self.quad / &n, self.radicand))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    /// Sign of the real value, with `√d` embedded as the positive root.
    pub fn sign(&self) -> Sign {
        let rs = self.rat.numer().sign();
        let qs = self.quad.numer().sign();
        if qs == Sign::NoSign {
            return rs;
        }
        if rs == Sign::NoSign || rs == qs {
            return qs;
        }
        // Opposite signs: the term with the larger square wins.
        let d = BigRational::from_integer(BigInt::from(self.radicand.unwrap_or(0)));
        let r2 = &self.rat * &self.rat;
        let q2d = &self.quad * &self.quad * d;
        if r2 > q2d {
            rs
        } else {
            qs
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison of real values. Panics on incompatible fields.
    pub fn cmp_real(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self - other).sign() {
            Sign::Minus => std::cmp::Ordering::Less,
            Sign::NoSign => std::cmp::Ordering::Equal,
            Sign::Plus => std::cmp::Ordering::Greater,
        }
    }

    /// Largest integer not exceeding the value, computed with integer square roots.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rat.floor().to_integer();
        }
        // value = (a + b·√d) / c with c > 0
        let c = self.rat.denom().lcm(self.quad.denom());
        let a = (&self.rat * BigRational::from_integer(c.clone())).to_integer();
        let b = (&self.quad * BigRational::from_integer(c.clone())).to_integer();
        let d = BigInt::from(self.radicand.unwrap_or(0));
        let s = (&b * &b * d).sqrt();
        // b·√d lies strictly between consecutive integers since it is irrational.
        let lower = if b.is_positive() { a + s } else { a - s - 1 };
        lower.div_floor(&c)
    }

    /// The denominators of both coordinates.
    pub fn denominators(&self) -> (BigInt, BigInt) {
        (self.rat.denom().clone(), self.quad.denom().clone())
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.quad.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

// Operator impls panic on mixing different quadratic fields; use the
// `checked_*` methods where that can happen.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {}", stringify!($method), e),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::build(-&self.rat, -&self.quad, self.radicand)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Renders `a/b`, `c/d*sqrt(D)` or `a/b+c/d*sqrt(D)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.radicand else {
            return write!(f, "{}", fmt_rational(&self.rat));
        };
        let root = format!("sqrt({d})");
        if self.rat.is_zero() {
            return write!(f, "{}*{}", fmt_rational(&self.quad), root);
        }
        let sep = if self.quad.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*{}", fmt_rational(&self.rat), sep, fmt_rational(&self.quad.abs()), root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn r2() -> Scalar {
        Scalar::sqrt(2).unwrap()
    }

    #[test]
    fn conjugate_product_and_inverse() {
        let one = Scalar::one();
        assert_eq!((&one + r2()) * (&one - r2()), Scalar::from_int(-1));
        assert_eq!((&one + r2()).checked_inv().unwrap(), -one + r2());
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(3, 5) + q(1, 7), q(26, 35));
    }

    #[test]
    fn signs() {
        let three_minus = Scalar::from_int(3) - Scalar::from_int(2) * r2();
        assert_eq!(three_minus.sign(), Sign::Plus);
        assert_eq!(Scalar::zero().sign(), Sign::NoSign);
        assert_eq!((Scalar::one() - r2()).sign(), Sign::Minus);
        assert_eq!((-r2()).sign(), Sign::Minus);
    }

    #[test]
    fn errors() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        let r3 = Scalar::sqrt(3).unwrap();
        assert_eq!(
            r2().checked_add(&r3),
            Err(ScalarError::IncompatibleAmbientField { left: 2, right: 3 })
        );
        assert_eq!(Scalar::sqrt(8), Err(ScalarError::InvalidRadicand(8)));
        assert_eq!(Scalar::sqrt(1), Err(ScalarError::InvalidRadicand(1)));
        // a rational value mixes with any field
        assert!(q(1, 2).checked_mul(&r3).is_ok());
    }

    #[test]
    fn radicand_dropped_when_rational() {
        let x = r2() * r2();
        assert_eq!(x, Scalar::from_int(2));
        assert_eq!(x.radicand(), None);
        assert_eq!(r2() - r2(), Scalar::zero());
    }

    #[test]
    fn floors() {
        assert_eq!(r2().floor(), BigInt::from(1));
        assert_eq!((-r2()).floor(), BigInt::from(-2));
        assert_eq!((q(1, 2) + r2()).floor(), BigInt::from(1));
        assert_eq!((q(-7, 3) + q(1, 3) * r2()).floor(), BigInt::from(-2));
        assert_eq!((Scalar::from_int(10) * Scalar::sqrt(3).unwrap()).floor(), BigInt::from(17));
        assert_eq!(q(-1, 2).floor(), BigInt::from(-1));
    }

    #[test]
    fn display() {
        assert_eq!(q(-3, 5).to_string(), "-3/5");
        assert_eq!((q(1, 2) - q(3, 4) * r2()).to_string(), "1/2-3/4*sqrt(2)");
        assert_eq!(r2().to_string(), "1*sqrt(2)");
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(2));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(49));
        assert!(!is_squarefree(0));
    }
}
