use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {what} is {actual}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("catalog parse error at line {line}, column {column}: {message}")]
    CatalogSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("catalog entry `{entry}`: {message}")]
    CatalogEntry { entry: String, message: String },

    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),

    #[error("missing {0} bound")]
    MissingBound(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used for the CLI's JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidScenario(_) => "invalid_scenario",
            Error::Precondition(_) => "precondition",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::CatalogSyntax { .. } => "catalog_syntax",
            Error::CatalogEntry { .. } => "catalog_entry",
            Error::UnknownInequality(_) => "unknown_inequality",
            Error::MissingBound(_) => "missing_bound",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}
