use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} {requested} exceeds bound {bound}")]
    Capacity {
        what: &'static str,
        requested: usize,
        bound: usize,
    },

    #[error(transparent)]
    Algebra(#[from] posthopf_core::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
