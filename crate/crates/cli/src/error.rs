use thiserror::Error;

/// CLI failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("certification failed: {0}")]
    Certification(String),

    #[error("config error at `{path}`: {msg}")]
    Schema { path: String, msg: String },

    #[error("{context}: {source}")]
    Math {
        context: String,
        #[source]
        source: blochop::Error,
    },

    #[error("incompatible operator and space: {0}")]
    Incompatible(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Self::Schema {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// Wraps a core error, routing certification and operator-kind errors to
    /// their own exit codes.
    pub fn math(context: impl Into<String>, source: blochop::Error) -> Self {
        match source {
            blochop::Error::Certification { .. } => Self::Certification(format!("{}: {source}", context.into())),
            blochop::Error::WrongOperatorKind(msg) => Self::Incompatible(msg),
            source => Self::Math {
                context: context.into(),
                source,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Certification(_) => 1,
            Self::Schema { .. } => 2,
            Self::Math { .. } => 3,
            Self::Incompatible(_) => 4,
            Self::Output { .. } => 5,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a context label to core results.
pub(crate) trait Context<T> {
    fn ctx(self, context: &str) -> CliResult<T>;
}

impl<T> Context<T> for blochop::Result<T> {
    fn ctx(self, context: &str) -> CliResult<T> {
        self.map_err(|e| CliError::math(context, e))
    }
}
