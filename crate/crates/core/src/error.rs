//! Error type shared by every pipeline stage.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the toolkit.
///
/// `Config` covers bad user-supplied settings (CLI maps it to exit code 1);
/// everything else is a runtime or data failure (exit code 2).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// File system failure, annotated with the offending path.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// Malformed input data (bad cell, empty column, inconsistent rows).
    #[error("parse error: {0}")]
    Parse(String),
    /// Invalid configuration or parameter value.
    #[error("invalid config: {0}")]
    Config(String),
    /// Operation preconditions violated by the data at hand.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Input is structurally valid but degenerate for the requested statistic.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Failure wrapped with the pipeline stage that produced it.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the pipeline stage name to an error.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// Process exit code the CLI reports for this error:
    /// 1 for configuration problems, 2 for runtime or data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
