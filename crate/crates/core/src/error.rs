use thiserror::Error;

/// Errors raised by the purity, model and oracle routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} needs dimension {dim}, above the dense limit {limit}")]
    Resource {
        what: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("expectation value has imaginary part {0:.3e}")]
    ComplexExpectation(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("ground state outside the J = N/2 sector: <J^2> = {found:.6e}, expected {expected}")]
    SectorCheck { expected: f64, found: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
