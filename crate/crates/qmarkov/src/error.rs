use thiserror::Error;

/// Errors surfaced by channel construction and the analyses built on top of it.
#[derive(Debug, Error)]
pub enum QmcError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("matrix is not Hermitian (max |A - A'| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("state has invalid trace {trace:.6e} (expected 0 < tr <= 1)")]
    InvalidTrace { trace: f64 },

    #[error("Kraus operators are not trace-preserving: max |sum_i E_i'E_i - I| = {deviation:.3e}")]
    NotTracePreserving { deviation: f64 },

    #[error("Kraus operators exceed the trace bound sum_i E_i'E_i <= I by {excess:.3e}")]
    TraceBoundExceeded { excess: f64 },

    #[error("a channel needs at least one Kraus operator")]
    EmptyKraus,

    #[error("subspace is not contained in the requested ambient subspace")]
    NotContained,

    #[error("operation requires a nonzero subspace")]
    ZeroSubspace,

    #[error("eigenvalue-1 cluster is numerically defective (residual {residual:.3e})")]
    DefectiveSpectralProjector { residual: f64 },

    #[error("decomposition recursion exceeded depth {depth}; the input subspace does not support a fixed point state")]
    DecompositionDepthExceeded { depth: usize },

    #[error("no fixed point state exists on the requested subspace")]
    NoFixedPoint,

    #[error("positive-part split failed to shrink the support after a retry")]
    SplitDidNotShrink,

    #[error("computed probability {value:.6e} lies outside [0, 1] beyond numerical slack")]
    ProbabilityOutOfRange { value: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QmcError {
    pub(crate) fn dims(context: impl Into<String>) -> Self {
        QmcError::DimensionMismatch {
            context: context.into(),
        }
    }
}
