use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate {family}: {detail}")]
    InvalidSize {
        family: &'static str,
        detail: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid character table: {0}")]
    InvalidCharacterTable(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no checks selected")]
    NoChecksSelected,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence { .. } | Error::Numerical(_) | Error::Io(_)
        )
    }
}
