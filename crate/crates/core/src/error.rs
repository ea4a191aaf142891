//! Error type shared across the crate.
//!
//! Residuals are reported as `f64` regardless of the working scalar type so
//! the error enum stays non-generic.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a projector (residual {residual:.3e})")]
    NotAProjector { residual: f64 },

    #[error("projectors are not mutually exclusive (product norm {residual:.3e})")]
    NotMutuallyExclusive { residual: f64 },

    #[error("incompatible observables ({left}, {right}): commutator norm {commutator_norm:.3e}")]
    IncompatibleObservables {
        left: String,
        right: String,
        commutator_norm: f64,
    },

    #[error("projector is not elementary (trace {trace})")]
    NotElementary { trace: f64 },

    #[error("the zero projector is not admitted here")]
    ZeroProjector,

    #[error("basis element {index} is not elementary (trace {trace})")]
    NotElementaryBasis { index: usize, trace: f64 },

    #[error("function not defined at {input}")]
    FunctionDomainError { input: f64 },

    #[error("no supplied core yields a non-null dyadic form at index {index}")]
    DegenerateCore { index: usize },

    #[error("numerical degeneracy: {detail}")]
    NumericalDegeneracy { detail: String },

    #[error("component matrices belong to different dyad bases ({left} vs {right})")]
    BasisMismatch { left: String, right: String },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexError { index: usize, dim: usize },

    #[error("invalid matrix: {reason}")]
    InvalidMatrix { reason: String },

    #[error("invalid ensemble model: {reason}")]
    InvalidModel { reason: String },

    #[error("tolerances must be finite and strictly positive")]
    InvalidTolerance,
}

impl AlgebraError {
    /// Machine-readable error kind, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraError::DimensionMismatch { .. } => "DimensionMismatch",
            AlgebraError::NotHermitian { .. } => "NotHermitian",
            AlgebraError::NotAProjector { .. } => "NotAProjector",
            AlgebraError::NotMutuallyExclusive { .. } => "NotMutuallyExclusive",
            AlgebraError::IncompatibleObservables { .. } => "IncompatibleObservables",
            AlgebraError::NotElementary { .. } => "NotElementary",
            AlgebraError::ZeroProjector => "ZeroProjector",
            AlgebraError::NotElementaryBasis { .. } => "NotElementaryBasis",
            AlgebraError::FunctionDomainError { .. } => "FunctionDomainError",
            AlgebraError::DegenerateCore { .. } => "DegenerateCore",
            AlgebraError::NumericalDegeneracy { .. } => "NumericalDegeneracy",
            AlgebraError::BasisMismatch { .. } => "BasisMismatch",
            AlgebraError::LengthMismatch { .. } => "LengthMismatch",
            AlgebraError::IndexError { .. } => "IndexError",
            AlgebraError::InvalidMatrix { .. } => "InvalidMatrix",
            AlgebraError::InvalidModel { .. } => "InvalidModel",
            AlgebraError::InvalidTolerance => "InvalidTolerance",
        }
    }
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
