use std::path::PathBuf;

/// Errors produced by the clustering library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input data or a matrix argument violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A tuning parameter is out of its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The symmetric eigensolver did not converge.
    #[error("eigensolver failed on a {order}x{order} matrix: {detail}")]
    EigenNonConvergence { order: usize, detail: String },

    /// A file could not be read or written.
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file is readable but its contents are malformed.
    #[error("format error in {}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    /// A CSV cell failed to parse.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
