use thiserror::Error;

/// Which of the two block inclusions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusion {
    /// `ker A22 ⊆ ker A12`
    KernelIntoA12,
    /// `ran A21 ⊆ ran A22`
    RangeOfA21,
}

impl std::fmt::Display for Inclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inclusion::KernelIntoA12 => f.write_str("ker A22 ⊆ ker A12"),
            Inclusion::RangeOfA21 => f.write_str("ran A21 ⊆ ran A22"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("block inclusion failed: {}", .failed.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "))]
    InclusionFailure { failed: Vec<Inclusion>, residuals: [f64; 2] },

    /// `y2 - A21 x1` has a component outside `ran A22`.
    #[error("no solution: y2 - A21 x1 leaves ran A22 (residual {residual:e})")]
    NoSolution { residual: f64 },

    /// An iterative decomposition failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
