//! Exact arithmetic over the max-plus semifield Q ∪ {-inf}, and the
//! geometry built on it: finitely generated modules in T^n with residuation
//! and minimal bases, tropical projective polytopes and polytrope
//! detection, square matrices with an eigen-dichotomy solver, divisor
//! calculus on metric graphs, and plane curve skeletons.
//!
//! Everything is computed over arbitrary-precision rationals; ties are
//! decided exactly, never by tolerance.

pub mod curve;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod module;
pub mod planecurve;
pub mod poly;
pub mod polytope;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::{Dichotomy, TropMatrix};
pub use module::{dual_eval, left_inverse, Bound, CMatrix, LatticeCheck, SectionMap, Submodule};
pub use poly::{predicate_membership, TropPolynomial};
pub use polytope::{Polytope, ProjPoint};
pub use scalar::TropScalar;
pub use vector::TropVector;
