use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("active-set Gram matrix is singular when adding variable {variable} (pivot {pivot:e})")]
    RankDeficientActiveSet { variable: usize, pivot: f64 },

    #[error("lasso homotopy exceeded {0} events")]
    PathEventLimit(usize),

    #[error("simplex basis matrix is singular")]
    SingularBasis,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),

    #[error("lambda {lambda} lies below the terminal path value {terminal}")]
    OutOfRange { lambda: f64, terminal: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no diagonally dominant design found in {attempts} attempts")]
    DominanceNotFound { attempts: usize },

    #[error("certificate failed for {method} at lambda {lambda}")]
    CertificateFailed { method: &'static str, lambda: f64 },

    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for solver and certificate failures, false for bad input or
    /// configuration.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Replicate { source, .. } => source.is_numerical(),
            Error::DimensionMismatch(_)
            | Error::OutOfRange { .. }
            | Error::InvalidConfig(_)
            | Error::Csv(_)
            | Error::Io(_) => false,
            _ => true,
        }
    }
}
