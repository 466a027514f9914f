use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Algebra(#[from] posthopf_core::Error),

    #[error(transparent)]
    Geometry(#[from] posthopf_geomint::GeomError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the invocation got wrong, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use posthopf_geomint::GeomError;
        match self {
            CliError::Io(_) | CliError::Geometry(GeomError::Numeric(_)) => 1,
            _ => 2,
        }
    }
}
