//! Exact rational scalars with an inexactness flag.
//!
//! Every distance, weight and score in this crate is a [`Scalar`]: an
//! arbitrary-precision rational plus a flag recording whether the value was
//! obtained by exact arithmetic all the way from exact inputs. Euclidean
//! ingestion and the geometric-mean suitable function go through `f64` and
//! produce inexact scalars; everything downstream of them stays inexact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An exact rational number, possibly flagged as an approximation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: BigRational,
    exact: bool,
}

impl Scalar {
    pub fn new(value: BigRational) -> Self {
        Scalar { value, exact: true }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`. Errors on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::new(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// Converts an `f64` to its exact binary rational value, flagged inexact.
    pub fn from_f64_approx(x: f64) -> Result<Self, Error> {
        let value = BigRational::from_float(x).ok_or(Error::NonFiniteFloat(x))?;
        Ok(Scalar { value, exact: false })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn abs(&self) -> Scalar {
        Scalar {
            value: self.value.abs(),
            exact: self.exact,
        }
    }

    pub fn recip(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar {
            value: self.value.recip(),
            exact: self.exact,
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.clone() / rhs.clone())
    }

    /// Floating view for display and for float-path oracles.
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Marks the scalar inexact (used when a value passed through floats).
    pub fn into_inexact(mut self) -> Scalar {
        self.exact = false;
        self
    }

    /// Parses an integer or a `p/q` fraction. Decimal notation is rejected
    /// unless `allow_decimal` is set, in which case the exact decimal
    /// expansion is used ("1.7" becomes 17/10 and stays exact).
    pub fn parse(text: &str, allow_decimal: bool) -> Result<Self, Error> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num = BigInt::from_str(num.trim())
                .map_err(|_| Error::ScalarParse(text.to_string()))?;
            let den = BigInt::from_str(den.trim())
                .map_err(|_| Error::ScalarParse(text.to_string()))?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::new(BigRational::new(num, den)));
        }
        if let Ok(int) = BigInt::from_str(text) {
            return Ok(Scalar::new(BigRational::from_integer(int)));
        }
        if text.contains('.') {
            if !allow_decimal {
                return Err(Error::DecimalRejected(text.to_string()));
            }
            // Exact decimal expansion: "1.7" becomes 17/10, still exact.
            let (int_part, frac_part) = text.split_once('.').unwrap();
            let digits = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
            let num = BigInt::from_str(&digits)
                .map_err(|_| Error::ScalarParse(text.to_string()))?;
            let num = if int_part.starts_with('-') { -num } else { num };
            let den = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Scalar::new(BigRational::new(num, den)));
        }
        Err(Error::ScalarParse(text.to_string()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_integer() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar {
                    value: self.value.$method(rhs.value),
                    exact: self.exact && rhs.exact,
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.clone().$method(rhs.clone())
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Div for Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] when the
    /// divisor is not known to be nonzero.
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        Scalar {
            value: self.value / rhs.value,
            exact: self.exact && rhs.exact,
        }
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.clone() / rhs.clone()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: -self.value,
            exact: self.exact,
        }
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Scalar", 3)?;
        s.serialize_field("num", &self.value.numer().to_string())?;
        s.serialize_field("den", &self.value.denom().to_string())?;
        s.serialize_field("exact", &self.exact)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
            #[serde(default = "default_exact")]
            exact: bool,
        }
        fn default_exact() -> bool {
            true
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = BigInt::from_str(&raw.num).map_err(serde::de::Error::custom)?;
        let den = BigInt::from_str(&raw.den).map_err(serde::de::Error::custom)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Scalar {
            value: BigRational::new(num, den),
            exact: raw.exact,
        })
    }
}
