use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid membership function: {0}")]
    InvalidMembership(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid linguistic variable `{variable}`: {reason}")]
    InvalidVariable { variable: String, reason: String },

    #[error("input {value} for `{variable}` is outside universe [{lo}, {hi}]")]
    OutOfRange {
        variable: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("no rule fired in `{system}` for inputs {inputs}")]
    NoRuleFired { system: String, inputs: String },

    #[error("invalid rule base in `{system}`: {reason}")]
    InvalidRuleBase { system: String, reason: String },

    #[error("missing input `{0}`")]
    MissingInput(String),

    #[error("unknown input variable `{0}`")]
    UnknownInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid rating `{level}` for cost driver {driver}")]
    InvalidRating { driver: String, level: String },

    #[error("invalid cost-driver table: {0}")]
    DriverTable(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("FIS definition: {0}")]
    FisFile(String),

    #[error("configuration {config}: {source}")]
    Experiment {
        config: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
