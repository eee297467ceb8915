use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix has eigenvalue {value:e} below the positivity tolerance")]
    NotPositive { value: f64 },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "overlaps F = {re_f} + {im_f}i, G = {g} are not realizable: Fourier weight {index} is {weight:e}"
    )]
    NotRealizable {
        re_f: f64,
        im_f: f64,
        g: f64,
        index: usize,
        weight: f64,
    },

    #[error("overlaps F = {re_f} + {im_f}i, G = {g} violate |F| <= 1/3, |G| <= 1/3")]
    NotHonestFeasible { re_f: f64, im_f: f64, g: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid state ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("square-root measurement requires equal priors (got {0:?})")]
    UnequalPriors(Vec<f64>),

    #[error("ensemble member {0} has no entry in the outcome map")]
    UnmappedState(usize),

    #[error("closed-form branches disagree: {0}")]
    BranchMismatch(String),

    #[error("{0}")]
    OutOfRange(String),

    #[error("strategy {strategy} cannot be used {context}")]
    InvalidStrategy {
        strategy: &'static str,
        context: &'static str,
    },

    #[error("io error: {0}")]
    Io(String),

    #[error("malformed record: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
