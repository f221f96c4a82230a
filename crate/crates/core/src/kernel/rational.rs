//! Arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KernelError;

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The value as an `i64` if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// `self * den` as an integer, if exact and small.
    pub fn scaled(&self, den: u32) -> Option<i64> {
        (self * &Rational::from_int(den as i64)).to_i64()
    }

    /// Generalized binomial coefficient `binom(self, k)` for `k >= 0`.
    pub fn binomial(&self, k: u32) -> Self {
        let mut acc = Rational::one();
        for i in 0..k {
            acc = &acc * &(self - &Rational::from_int(i as i64));
            acc = &acc / &Rational::from_int(i as i64 + 1);
        }
        acc
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || KernelError::Parse(format!("invalid rational `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(KernelError::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(0, 7).to_string(), "0");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn parse() {
        assert_eq!("1/2".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("-12".parse::<Rational>().unwrap(), Rational::from_int(-12));
        assert_eq!("4/-6".parse::<Rational>().unwrap(), Rational::new(-2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(Rational::from_int(5).binomial(2), Rational::from_int(10));
        assert_eq!(Rational::from_int(-2).binomial(3), Rational::from_int(-4));
        assert_eq!(Rational::new(1, 2).binomial(2), Rational::new(-1, 8));
        assert_eq!(Rational::from_int(3).binomial(0), Rational::one());
    }

    #[test]
    fn floor_and_scaled() {
        assert_eq!(Rational::new(-1, 2).floor(), BigInt::from(-1));
        assert_eq!(Rational::new(7, 3).floor(), BigInt::from(2));
        assert_eq!(Rational::new(-5, 2).scaled(2), Some(-5));
        assert_eq!(Rational::new(1, 3).scaled(2), None);
    }
}
