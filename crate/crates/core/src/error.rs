use thiserror::Error;

/// Errors raised by the exact-arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular (determinant zero)")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("root enclosure could not be certified within {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("radius comparison undecided within {bits} bits")]
    Undecided { bits: u32 },
    #[error("map is quasi-unipotent (dynamical degree 1)")]
    QuasiUnipotent,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("orbit hit the indeterminacy locus at step {step}")]
    IndeterminacyHit { step: usize },
    #[error("coordinate {index} is zero; point is not on the torus")]
    ZeroCoordinate { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Resource exhaustion (precision, budgets) as opposed to a domain error.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::Undecided { .. } | Error::BudgetExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
