use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario does not match any of the five interaction configurations.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The front-tracking engine reached a state it has no rule for.
    #[error("inconsistent interaction at t={t}, x={x}: {msg}")]
    Inconsistent { t: f64, x: f64, msg: String },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed scenario file: {0}")]
    Parse(String),
}
