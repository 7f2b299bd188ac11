//! Truncated emitter ⊗ cavity Hilbert space: operators, states and averages.

mod eigen;
mod matrix;
mod space;
mod state;

use thiserror::Error;

pub use eigen::{hermitian_eigenvalues, symmetric_eigenvalues};
pub use matrix::{tensor_product, Operator};
pub use space::{
    build_system_operators, EmitterLevels, Level, SystemOperators, SystemSpace,
    DEFAULT_FOCK_CUTOFF,
};
pub use state::{
    expectation, DensityMatrix, Observable, PureState, HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),
    #[error("emitter must have 2 or 3 levels, got {0}")]
    InvalidLevels(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    TraceNotUnity(f64),
    #[error("negative eigenvalue {0:e}")]
    NotPositive(f64),
}
