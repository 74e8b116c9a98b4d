use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a geometric quantity.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("mesh file, line {line} ({record}): {message}")]
    Parse {
        line: usize,
        record: String,
        message: String,
    },

    #[error("degenerate triangle {index}: area {area:e} below {threshold:e}")]
    DegenerateTriangle {
        index: usize,
        area: f64,
        threshold: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            context: path.display().to_string(),
            source,
        }
    }
}
