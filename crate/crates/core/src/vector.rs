//! Vectors in T^n with the coordinatewise partial order, join/meet, the
//! dual pairing, and the interior reflection map.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::TropScalar;

/// A point of the free module T^n. The length is fixed per value; binary
/// operations require equal lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropVector {
    coords: Vec<TropScalar>,
}

impl TropVector {
    pub fn new(coords: Vec<TropScalar>) -> Self {
        assert!(!coords.is_empty(), "vectors have length >= 1");
        TropVector { coords }
    }

    /// The bottom vector, every coordinate `-inf`.
    pub fn bottom(n: usize) -> Self {
        TropVector::new(vec![TropScalar::NegInf; n])
    }

    /// The i-th unit vector: 0 in coordinate `i`, `-inf` elsewhere.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut coords = vec![TropScalar::NegInf; n];
        coords[i] = TropScalar::one();
        TropVector::new(coords)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        TropVector::new(v.iter().map(|&x| TropScalar::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Always false: vectors have length at least 1.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[TropScalar] {
        &self.coords
    }

    pub fn is_bottom(&self) -> bool {
        self.coords.iter().all(TropScalar::is_neg_inf)
    }

    pub fn all_finite(&self) -> bool {
        self.coords.iter().all(TropScalar::is_finite)
    }

    fn check_len(&self, other: &TropVector) -> Result<()> {
        if self.len() != other.len() {
            Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Coordinatewise max; this is both the module addition and the lattice join.
    pub fn join(&self, other: &TropVector) -> Result<TropVector> {
        self.check_len(other)?;
        Ok(TropVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Coordinatewise min, the lattice meet of the ambient free module.
    pub fn meet(&self, other: &TropVector) -> Result<TropVector> {
        self.check_len(other)?;
        Ok(TropVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| if a <= b { a.clone() } else { b.clone() })
                .collect(),
        ))
    }

    /// The canonical partial order: `v <= w` iff `v ⊕ w = w`.
    pub fn leq(&self, other: &TropVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    /// Scalar action `a ⊙ v`: adds `a` to every coordinate; `-inf` sends
    /// everything to bottom.
    pub fn scale(&self, a: &TropScalar) -> TropVector {
        TropVector::new(self.coords.iter().map(|c| a * c).collect())
    }

    /// Dual pairing `⟨v, ξ⟩ = max_i (v_i ⊙ ξ_i)`.
    pub fn pairing(&self, xi: &TropVector) -> Result<TropScalar> {
        self.check_len(xi)?;
        Ok(self
            .coords
            .iter()
            .zip(&xi.coords)
            .fold(TropScalar::zero(), |acc, (a, b)| &acc + &(a * b)))
    }

    /// The order-reversing bijection between interior vectors and interior
    /// dual vectors: coordinatewise negation. Only defined on fully finite
    /// vectors.
    pub fn psi(&self) -> Result<TropVector> {
        if let Some(index) = self.coords.iter().position(TropScalar::is_neg_inf) {
            return Err(Error::NotInteriorVector { index });
        }
        Ok(TropVector::new(
            self.coords
                .iter()
                .map(|c| TropScalar::one().div(c).expect("finite coordinate"))
                .collect(),
        ))
    }

    /// Scales so the largest finite coordinate becomes 0; `None` for bottom.
    /// Two vectors span the same ray exactly when they normalize equal.
    pub fn normalize_ray(&self) -> Option<TropVector> {
        let max = self.coords.iter().max()?;
        let max = max.clone();
        if max.is_neg_inf() {
            return None;
        }
        Some(TropVector::new(
            self.coords
                .iter()
                .map(|c| c.div(&max).expect("max is finite"))
                .collect(),
        ))
    }
}

impl Index<usize> for TropVector {
    type Output = TropScalar;
    fn index(&self, i: usize) -> &TropScalar {
        &self.coords[i]
    }
}

impl fmt::Display for TropVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
