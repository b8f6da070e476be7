use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation inconclusive: {0}")]
    TruncationInconclusive(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("singularity on path: {0}")]
    SingularityOnPath(String),
    #[error("improper at level {0}")]
    Improper(usize),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable short tag, used by the CLI for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::TruncationInconclusive(_) => "truncation-inconclusive",
            Error::QuadratureFailure(_) => "quadrature-failure",
            Error::SingularityOnPath(_) => "singularity-on-path",
            Error::Improper(_) => "improper",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
