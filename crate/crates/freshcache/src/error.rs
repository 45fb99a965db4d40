use thiserror::Error;

/// Errors produced by catalog construction, the analytic layer, the
/// simulator, and the verification oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation; `field` names the offending input.
    #[error("invalid `{field}`: {message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },

    /// A formula was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The gain expression was evaluated at (or too close to) its pole.
    #[error("pole in gain expression: {0}")]
    Pole(String),

    /// A minimum or root was not bracketed by the search range.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// Value iteration exhausted its sweep budget before the stopping
    /// tolerance was met.
    #[error("value iteration did not converge within {sweeps} sweeps (last sup-norm change {last_change:.3e})")]
    NoConvergence { sweeps: usize, last_change: f64 },

    /// A converged policy was not of threshold type, or a value function
    /// lost monotonicity.
    #[error("structural violation: {0}")]
    StructuralViolation(String),

    /// Configuration file or CLI argument problem.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}
