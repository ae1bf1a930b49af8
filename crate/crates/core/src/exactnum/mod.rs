//! Exact scalars and polynomials.
//!
//! Everything downstream is decided by exact sign computations over
//! [`Rational`]; there is no floating point in any decision path.

mod multipoly;
mod poly;
mod region;
mod roots;
mod upoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use multipoly::MultiPoly;
pub use poly::{Poly, PolyTerm};
pub use region::{
    eventual_sign_at, eventual_sign_region, feasible_set, Bound, RealInterval, SignCondition,
    SignRegion,
};
pub use roots::{isolate_real_roots, RealPoint, RealRoot, RootBox};
pub use upoly::UPoly;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r: Rational = s.parse().ok()?;
    Some(r)
}

/// Decimal rendering for display only.
pub fn approx(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn of_int(n: &BigInt) -> Sign {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

/// Coefficient rings used to evaluate intersection numbers and Euler
/// characteristics symbolically: rationals, polynomials in `{m, b}`, or
/// multivariate polynomials.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rational(r: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    fn scale(&self, r: &Rational) -> Self {
        if r.is_one() {
            self.clone()
        } else {
            self.clone() * Self::from_rational(r.clone())
        }
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Ring for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
}

/// Sign of a univariate polynomial in `m` at all sufficiently large `m`.
pub fn eventual_sign(p: &UPoly) -> Sign {
    p.leading().map(Sign::of).unwrap_or(Sign::Zero)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Serde adapter writing rationals as `"p/q"` strings (`q` omitted when 1).
pub mod rational_str {
    use super::{parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upoly(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn eventual_sign_examples() {
        // m^2 - 100 m
        assert_eq!(eventual_sign(&upoly(&[0, -100, 1])), Sign::Positive);
        assert_eq!(eventual_sign(&UPoly::zero()), Sign::Zero);
        // -2 m^3 + 7 m + 1000
        assert_eq!(eventual_sign(&upoly(&[1000, 7, 0, -2])), Sign::Negative);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(frac(-6, 4).to_string(), "-3/2");
        assert_eq!(rat(5).to_string(), "5");
        assert_eq!(parse_rational("-3/2"), Some(frac(-3, 2)));
        assert_eq!(parse_rational(" 7 "), Some(rat(7)));
        assert_eq!(parse_rational("1/0x"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(0), BigInt::one());
    }
}
