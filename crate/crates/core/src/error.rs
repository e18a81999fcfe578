use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error:e} \
         (requested {tolerance:e}) after {intervals} intervals"
    )]
    Quadrature {
        value: f64,
        error: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not physical: {0}")]
    Unphysical(String),

    #[error("operator-sum representation undefined: {0}")]
    UndefinedRepresentation(String),

    #[error("operator-sum representation invalid: {0}")]
    InvalidRepresentation(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("integration step {dt:e} too large (dt * scale = {product:e}, limit {limit})")]
    StepTooLarge { dt: f64, product: f64, limit: f64 },

    #[error("positivity violated at t = {time}: minimum eigenvalue {min_eigenvalue:e}")]
    Positivity { time: f64, min_eigenvalue: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("no finite rate samples")]
    NoFiniteSamples,

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),

    #[error("at t = {time}: {source}")]
    AtTime { time: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at(self, time: f64) -> Self {
        match self {
            e @ Error::AtTime { .. } => e,
            e => Error::AtTime {
                time,
                source: Box::new(e),
            },
        }
    }

    /// Whether the error stems from user input rather than from a numerical
    /// failure. The CLI maps these to distinct exit codes.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. }
            | Error::UnknownPreset(_)
            | Error::UnknownAxis(_)
            | Error::InvalidParameter { .. }
            | Error::UnsupportedRegime(_)
            | Error::Empty(_)
            | Error::DimensionMismatch { .. } => true,
            Error::AtTime { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
