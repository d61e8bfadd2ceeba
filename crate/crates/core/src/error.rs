use thiserror::Error;

/// Errors surfaced by the toolkit. The CLI maps these onto exit codes:
/// domain/admissibility/catalog errors -> 2, solver errors -> 3, I/O -> 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("admissibility error: {0}")]
    Admissibility(String),

    #[error("unknown catalog entry: {0}")]
    Catalog(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Admissibility(_) | Error::Catalog(_) => 2,
            Error::Solver(_) => 3,
            Error::Io(_) => 4,
        }
    }
}
