//! Exact rational arithmetic. Every delay and cost in the library is a
//! [`Rational`]; there is deliberately no conversion from floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Arbitrary-precision rational stored in lowest terms with a positive
/// denominator. Comparisons are exact, so ties between costs are detected
/// reliably.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational(BigRational::from(BigInt::from(n)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        let mut acc = Rational::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Serialized form: a bare integer when the denominator is one, otherwise a
/// `[numerator, denominator]` pair. Floating-point literals are rejected on
/// input so inexact values can never sneak into an instance file.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let num = i64::try_from(self.numer()).map_err(|_| {
            serde::ser::Error::custom("rational numerator exceeds i64 range")
        })?;
        let den = i64::try_from(self.denom()).map_err(|_| {
            serde::ser::Error::custom("rational denominator exceeds i64 range")
        })?;
        if den == 1 {
            serializer.serialize_i64(num)
        } else {
            (num, den).serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        rational_from_value(&value).map_err(D::Error::custom)
    }
}

/// Parses an exact number from a JSON value: an integer or a `[num, den]`
/// pair. Anything with a fractional or exponential representation is an error.
pub fn rational_from_value(value: &serde_json::Value) -> Result<Rational, String> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::int(i))
            } else {
                Err(format!("inexact number {n}: write rationals as [num, den]"))
            }
        }
        serde_json::Value::Array(items) if items.len() == 2 => {
            let num = items[0]
                .as_i64()
                .ok_or_else(|| format!("bad numerator {:?}", items[0]))?;
            let den = items[1]
                .as_i64()
                .ok_or_else(|| format!("bad denominator {:?}", items[1]))?;
            if den <= 0 {
                return Err(format!("denominator must be positive, got {den}"));
            }
            Ok(Rational::new(num, den))
        }
        other => Err(format!("expected integer or [num, den], got {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_ordering() {
        assert_eq!(Rational::new(3, 2), Rational::new(6, 4));
        assert_eq!(Rational::new(-1, 2), Rational::new(1, -2));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert_eq!(Rational::new(3, 2) + Rational::int(3), Rational::new(9, 2));
    }

    #[test]
    fn serde_rejects_floats() {
        assert!(serde_json::from_str::<Rational>("1.5").is_err());
        assert!(serde_json::from_str::<Rational>("[3, 0]").is_err());
        let r: Rational = serde_json::from_str("[3, 2]").unwrap();
        assert_eq!(r, Rational::new(3, 2));
        assert_eq!(serde_json::to_string(&r).unwrap(), "[3,2]");
        let i: Rational = serde_json::from_str("7").unwrap();
        assert_eq!(serde_json::to_string(&i).unwrap(), "7");
    }
}
