use thiserror::Error;

/// Errors produced by the measurement toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    ConvergenceFailure { sweeps: usize, off_diagonal: f64 },

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("density matrix is invalid: {reason} (residual {residual:.3e})")]
    InvalidDensityMatrix { reason: &'static str, residual: f64 },

    #[error("operator set has not passed the completeness check")]
    IncompleteSet,

    #[error("completeness relation violated (residual {residual:.3e})")]
    CompletenessViolation { residual: f64 },

    #[error("outcome {outcome} has probability {probability:.3e}; post-measurement state is undefined")]
    ZeroProbabilityOutcome { outcome: usize, probability: f64 },

    #[error("unknown outcome {outcome} (set has {count} outcomes)")]
    UnknownOutcome { outcome: usize, count: usize },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("operators {i} and {j} are not mutually orthogonal (residual {residual:.3e})")]
    OrthogonalityViolation { i: usize, j: usize, residual: f64 },

    #[error("phase {index} is not unimodular (|alpha| = {modulus})")]
    PhaseNotUnimodular { index: usize, modulus: f64 },

    #[error("{phases} phases supplied for {operators} operators")]
    PhaseCountMismatch { phases: usize, operators: usize },

    #[error("invalid projector set: {reason} (residual {residual:.3e})")]
    InvalidProjectorSet { reason: String, residual: f64 },

    #[error("invalid POVM: {reason} (residual {residual:.3e})")]
    InvalidPovm { reason: String, residual: f64 },

    #[error("spectral reconstruction failed (residual {residual:.3e})")]
    SpectralReconstruction { residual: f64 },

    #[error("Bell index {0} out of range 0..=3")]
    InvalidBellIndex(usize),

    #[error("mirror does not commute with the two-qubit computational projectors (worst residual {residual:.3e} at projector {projector})")]
    NotBellCompatible { projector: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
