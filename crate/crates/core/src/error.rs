use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unbounded domain for variable {0}")]
    UnboundedDomain(usize),

    #[error("degenerate point: rotation angle undefined at the origin")]
    DegeneratePoint,

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A propagator proved that the current domain contains no feasible point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("infeasible domain")]
pub struct Infeasible;
