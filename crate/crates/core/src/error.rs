use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("ODE solution overflowed (|y| > 1e300) at t = {t}")]
    OverflowDetected { t: f64 },

    #[error("pole limit at t = {t} does not converge")]
    PoleSingularity { t: f64 },

    #[error("operation requires a pole model (grid must start at a pole with unit-sphere fiber)")]
    NotAModel,

    #[error("invalid warping function: {0}")]
    InvalidWarp(String),

    #[error("invalid case: {0}")]
    InvalidCase(String),

    #[error("identity requires a conformally flat profile (space-form fiber, n >= 3)")]
    NotConformallyFlat,

    #[error("eigenvalues are not trace free (sum = {sum:e})")]
    NotTraceFree { sum: f64 },

    #[error("missing parameters: {0}")]
    MissingParams(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("G must be positive; found {value} at t = {t}")]
    NonPositiveG { t: f64, value: f64 },

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("envelope violated: {0}")]
    EnvelopeViolation(String),

    #[error("negative radicand {0} in diameter bound")]
    NegativeRadicand(f64),

    #[error("evaluation at t = {t} lies outside [{t0}, {t1}]")]
    OutOfDomain { t: f64, t0: f64, t1: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Wraps the error with a context string such as a suite name.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
