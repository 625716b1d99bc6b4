//! The tropical semifield Q ∪ {-inf}: addition is max, multiplication is +.
//!
//! Values are exact rationals in lowest terms with positive denominator, so
//! equality, hashing and set membership are structural. `-inf` is the zero
//! element of the semifield and the rational `0` is its unity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One element of the max-plus semifield.
///
/// `NegInf` is the additive zero; it absorbs multiplication. Finite values
/// are arbitrary-precision rationals (`BigRational` keeps them reduced with
/// a positive denominator, which makes derived equality canonical).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TropScalar {
    NegInf,
    Finite(BigRational),
}

pub use TropScalar::NegInf;

impl TropScalar {
    /// The zero element of the semifield, `-inf`.
    pub fn zero() -> Self {
        TropScalar::NegInf
    }

    /// The unity of the semifield, the rational `0`.
    pub fn one() -> Self {
        TropScalar::int(0)
    }

    pub fn int(n: i64) -> Self {
        TropScalar::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        TropScalar::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        TropScalar::Finite(r)
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, TropScalar::NegInf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_neg_inf()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            TropScalar::NegInf => None,
            TropScalar::Finite(r) => Some(r),
        }
    }

    /// Tropical division `a ⊘ b`, i.e. rational subtraction.
    pub fn div(&self, rhs: &TropScalar) -> Result<TropScalar> {
        match (self, rhs) {
            (_, TropScalar::NegInf) => Err(Error::DivisionByZeroElement),
            (TropScalar::NegInf, _) => Ok(TropScalar::NegInf),
            (TropScalar::Finite(a), TropScalar::Finite(b)) => Ok(TropScalar::Finite(a - b)),
        }
    }

    /// Subtract a finite rational; `-inf` is fixed.
    pub fn minus_rat(&self, rhs: &BigRational) -> TropScalar {
        match self {
            TropScalar::NegInf => TropScalar::NegInf,
            TropScalar::Finite(a) => TropScalar::Finite(a - rhs),
        }
    }

    /// Tropical m-th root: the unique `b` with `b` multiplied with itself
    /// `m` times equal to `self`. Requires `m >= 1`.
    pub fn root(&self, m: u64) -> TropScalar {
        assert!(m >= 1, "root index must be positive");
        match self {
            TropScalar::NegInf => TropScalar::NegInf,
            TropScalar::Finite(a) => {
                TropScalar::Finite(a / BigRational::from_integer(BigInt::from(m)))
            }
        }
    }

    /// Tropical integer power `k ⊙ self` (ordinary multiplication by `k`).
    ///
    /// `k = 0` returns the unity even for `-inf` (an empty product). A
    /// negative power of `-inf` has no value in the semifield; callers must
    /// rule it out first.
    pub fn scale_int(&self, k: &BigInt) -> TropScalar {
        if k.is_zero() {
            return TropScalar::one();
        }
        match self {
            TropScalar::NegInf => {
                assert!(
                    k.is_positive(),
                    "negative power of -inf is undefined; guard before calling"
                );
                TropScalar::NegInf
            }
            TropScalar::Finite(a) => TropScalar::Finite(a * BigRational::from_integer(k.clone())),
        }
    }
}

impl PartialOrd for TropScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropScalar::NegInf, TropScalar::NegInf) => Ordering::Equal,
            (TropScalar::NegInf, _) => Ordering::Less,
            (_, TropScalar::NegInf) => Ordering::Greater,
            (TropScalar::Finite(a), TropScalar::Finite(b)) => a.cmp(b),
        }
    }
}

// a ⊕ b = max(a, b)
impl Add for &TropScalar {
    type Output = TropScalar;
    fn add(self, rhs: &TropScalar) -> TropScalar {
        if self >= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }
}

impl Add for TropScalar {
    type Output = TropScalar;
    fn add(self, rhs: TropScalar) -> TropScalar {
        if self >= rhs {
            self
        } else {
            rhs
        }
    }
}

// a ⊙ b = a + b, with -inf absorbing
impl Mul for &TropScalar {
    type Output = TropScalar;
    // tropical multiplication really is ordinary addition
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &TropScalar) -> TropScalar {
        match (self, rhs) {
            (TropScalar::Finite(a), TropScalar::Finite(b)) => TropScalar::Finite(a + b),
            _ => TropScalar::NegInf,
        }
    }
}

impl Mul for TropScalar {
    type Output = TropScalar;
    fn mul(self, rhs: TropScalar) -> TropScalar {
        &self * &rhs
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::NegInf => write!(f, "-inf"),
            TropScalar::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for TropScalar {
    type Err = Error;

    /// Parses the text form used everywhere in the JSON formats: `-inf`,
    /// an integer `p`, or a fraction `p/q` with positive `q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(TropScalar::NegInf);
        }
        let bad = || Error::InvalidScalar(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(TropScalar::Finite(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if !q.is_positive() {
                    return Err(bad());
                }
                Ok(TropScalar::Finite(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for TropScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TropScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
