use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has {0} entries, expected {1}x{2}")]
    ShapeMismatch(usize, usize, usize),

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("SVD did not converge for a {rows}x{cols} matrix")]
    SvdNoConvergence { rows: usize, cols: usize },

    #[error("truncation policy retains no singular values of a nonzero matrix")]
    EmptyTruncation,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("least-squares system is underdetermined: {distinct} distinct abscissae for degree {degree}")]
    Underdetermined { distinct: usize, degree: usize },

    #[error("rows are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("zero-norm state cannot be normalized")]
    ZeroNorm,

    #[error("site count mismatch: {0} vs {1}")]
    SiteMismatch(usize, usize),

    #[error("{n} qubits exceeds the dense limit of {limit} (set MPSPREP_DENSE_LIMIT to raise it)")]
    DenseLimit { n: usize, limit: usize },

    #[error("max bond dimension {0} exceeds 2; compress the MPS to chi <= 2 before extracting gates")]
    BondTooLarge(usize),

    #[error("MPS is not normalized (norm {0:.12})")]
    NotNormalized(f64),

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("circuit failed validation: {0}")]
    InvalidCircuit(String),

    #[error("no decay fit possible: every cut has fewer than two usable singular values")]
    NoUsableSpectra,

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("unsupported circuit format version {0:?}")]
    UnsupportedVersion(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Numerical,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Stage { source, .. } => source.class(),
            Error::Io(_) | Error::Json(_) | Error::Schema { .. } | Error::UnsupportedVersion(_) => {
                ErrorClass::Io
            }
            Error::InvalidArgument(_) | Error::Config(_) | Error::DenseLimit { .. } => {
                ErrorClass::Usage
            }
            _ => ErrorClass::Numerical,
        }
    }

    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
