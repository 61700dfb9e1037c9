use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("sizes sum {sum} != n {n}")]
    SizeMismatch { sum: usize, n: usize },

    #[error(
        "matrix not symmetric: entry ({row}, {col}) = {value} but ({col}, {row}) = {mirrored}"
    )]
    Asymmetric {
        row: usize,
        col: usize,
        value: f64,
        mirrored: f64,
    },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("degenerate embedding: no eigenvalue above tolerance (points coincide)")]
    DegenerateEmbedding,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
