use thiserror::Error;

/// Errors raised across the simulator and the verification harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("quadrature did not converge on [{a}, {b}] after {panels} panels (best estimate {best}, error {error})")]
    Convergence {
        a: f64,
        b: f64,
        panels: usize,
        best: f64,
        error: f64,
    },

    #[error("at node {index}: {source}")]
    AtNode { index: usize, source: Box<Error> },

    #[error("non-finite value at node {index} (r = {r}); blowup suspected")]
    BlowupSuspected { index: usize, r: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
