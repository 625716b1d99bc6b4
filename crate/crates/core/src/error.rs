//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero element -inf")]
    DivisionByZeroElement,
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("vector has a -inf coordinate at index {index}")]
    NotInteriorVector { index: usize },
    #[error("negative exponent meets a -inf coordinate at index {index}")]
    NegativePowerOfBottom { index: usize },
    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: i64 },
    #[error("a module needs at least one generator")]
    EmptyGenerators,
    #[error("vector is not in the module")]
    NotInModule,
    #[error(
        "generator {index} has a -inf coordinate; the exact test needs fully finite generators"
    )]
    NotInteriorGenerators { index: usize },
    #[error("module is not lattice-preserving: coordinate {coord} has no minimum in the module")]
    NotLatticePreserving { coord: usize },
    #[error("the base of a dual element must not be bottom")]
    BottomBase,
    #[error("column {index} lies in the span of the other columns")]
    NotInjective { index: usize },
    #[error("matrix size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix order {order} exceeds the exact enumeration bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
    #[error("projective dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("point {index} has a -inf coordinate; polytrope detection needs finite points")]
    NotFinitePoints { index: usize },
    #[error("polytope is not a polytrope")]
    NotPolytrope,
    #[error("point is not on the graph: {0}")]
    PointOffGraph(String),
    #[error("the function is identically -inf")]
    BottomFunction,
    #[error("function {index} is not a section of the divisor")]
    NotASection { index: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("polynomial has no terms")]
    EmptyPolynomial,
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("duplicate exponent {0:?}")]
    DuplicateExponent(Vec<i64>),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid function data: {0}")]
    InvalidFunction(String),
    #[error("invalid scalar literal: {0:?}")]
    InvalidScalar(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error envelope.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            DivisionByZeroElement => "DivisionByZeroElement",
            LengthMismatch { .. } => "LengthMismatch",
            NotInteriorVector { .. } => "NotInteriorVector",
            NegativePowerOfBottom { .. } => "NegativePowerOfBottom",
            NotHomogeneous { .. } => "NotHomogeneous",
            EmptyGenerators => "EmptyGenerators",
            NotInModule => "NotInModule",
            NotInteriorGenerators { .. } => "NotInteriorGenerators",
            NotLatticePreserving { .. } => "NotLatticePreserving",
            BottomBase => "BottomBase",
            NotInjective { .. } => "NotInjective",
            SizeMismatch { .. } => "SizeMismatch",
            OrderTooLarge { .. } => "OrderTooLarge",
            HypothesisViolated(_) => "HypothesisViolated",
            InternalVerificationFailed(_) => "InternalVerificationFailed",
            DimensionMismatch { .. } => "DimensionMismatch",
            NotFinitePoints { .. } => "NotFinitePoints",
            NotPolytrope => "NotPolytrope",
            PointOffGraph(_) => "PointOffGraph",
            BottomFunction => "BottomFunction",
            NotASection { .. } => "NotASection",
            PreconditionFailed(_) => "PreconditionFailed",
            EmptyPolynomial => "EmptyPolynomial",
            DegenerateCurve(_) => "DegenerateCurve",
            DuplicateExponent(_) => "DuplicateExponent",
            InvalidGraph(_) => "InvalidGraph",
            InvalidFunction(_) => "InvalidFunction",
            InvalidScalar(_) => "InvalidScalar",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
