use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants split into two families that the CLI maps onto distinct exit
/// codes: input problems (`Domain`, `Validation`, `ParameterOutOfRange`,
/// `Config`, `Io`) and numerical failures (`Accuracy`, `IllConditioned`,
/// `Optimization`, `Range`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy error: {what} (achieved error estimate {estimate:e})")]
    Accuracy { what: String, estimate: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("optimization error: {0}")]
    Optimization(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn accuracy(what: impl Into<String>, estimate: f64) -> Self {
        Error::Accuracy {
            what: what.into(),
            estimate,
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. }
                | Error::IllConditioned(_)
                | Error::Optimization(_)
                | Error::Range(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
