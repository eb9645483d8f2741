use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fcidump: {0}")]
    Fcidump(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("operator is not anti-Hermitian (largest Hermitian part {0:.3e})")]
    NotAntiHermitian(f64),

    #[error("expectation value has imaginary part {0:.3e}")]
    NonRealExpectation(f64),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("Taylor series did not converge within {0} terms")]
    SeriesNotConverged(usize),

    #[error("operator leaks amplitude outside the particle-number sector")]
    SectorLeak,

    #[error("operator has complex matrix elements in the sector basis ({0:.3e})")]
    ComplexMatrixElement(f64),

    #[error("line search failed: {0}")]
    LineSearch(String),

    #[error("empty operator pool")]
    EmptyPool,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotAntiHermitian(_)
                | Error::NonFinite(_)
                | Error::NonRealExpectation(_)
                | Error::SeriesNotConverged(_)
                | Error::SectorLeak
                | Error::ComplexMatrixElement(_)
                | Error::LineSearch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
