use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variant names double as the machine-readable `error` field emitted by the
/// CLI, so renaming one is a wire-format change.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is singular (s_min/s_max = {ratio:.3e})")]
    Singular { ratio: f64 },
    #[error("eigenvalue {value:.3e} is below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input states are linearly dependent; unambiguous discrimination is impossible")]
    LinearlyDependent,
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("operator is not invertible")]
    NonInvertible,
    #[error("operator does not map the states to orthogonal outputs (residual {residual:.3e})")]
    NotDiscriminated { residual: f64 },
    #[error("state {index} is the zero vector")]
    ZeroState { index: usize },
    #[error("priors are required for this operation")]
    MissingPriors,
    #[error("invalid priors: {0}")]
    InvalidPriors(String),
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("state has Schmidt rank {rank}, full rank {required} is required")]
    RankDeficient { rank: usize, required: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("block sizes do not match the degeneracy groups: {0}")]
    BlockSizeMismatch(String),
    #[error("operator is not passive (spectral norm {norm})")]
    NotPassive { norm: f64 },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier of the variant, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite => "NonFinite",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::Singular { .. } => "Singular",
            Error::NegativeEigenvalue { .. } => "NegativeEigenvalue",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::LinearlyDependent => "LinearlyDependent",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NonInvertible => "NonInvertible",
            Error::NotDiscriminated { .. } => "NotDiscriminated",
            Error::ZeroState { .. } => "ZeroState",
            Error::MissingPriors => "MissingPriors",
            Error::InvalidPriors(_) => "InvalidPriors",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::BlockSizeMismatch(_) => "BlockSizeMismatch",
            Error::NotPassive { .. } => "NotPassive",
            Error::NotDensityMatrix(_) => "NotDensityMatrix",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Internal(_) => "Internal",
        }
    }

    /// Process exit code: 2 parse, 3 dimension/precondition, 4 numeric, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::NonFinite | Error::Io(_) => 2,
            Error::DimensionMismatch(_)
            | Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::NotDiscriminated { .. }
            | Error::ZeroState { .. }
            | Error::MissingPriors
            | Error::InvalidPriors(_)
            | Error::NotNormalized { .. }
            | Error::InvalidWeights(_)
            | Error::LengthMismatch { .. }
            | Error::BlockSizeMismatch(_)
            | Error::NotDensityMatrix(_) => 3,
            Error::Singular { .. }
            | Error::NegativeEigenvalue { .. }
            | Error::LinearlyDependent
            | Error::NonInvertible
            | Error::RankDeficient { .. }
            | Error::NotPassive { .. }
            | Error::NoConvergence { .. } => 4,
            Error::Internal(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
