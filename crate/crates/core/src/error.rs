use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid n-gram order {0}: orders start at 1")]
    InvalidOrder(usize),

    #[error("n-gram order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("invalid metric configuration: {0}")]
    InvalidConfig(String),

    #[error("corpus alignment error: {0}")]
    Alignment(String),

    #[error("sentence {sentence} has no references")]
    NoReferences { sentence: usize },

    #[error("ranking is empty")]
    EmptyRanking,

    #[error("duplicate system id `{0}`")]
    DuplicateId(String),

    #[error("length mismatch: {left} vs {right} values")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation needs at least 2 values, got {0}")]
    TooFewValues(usize),

    #[error("correlation undefined: input is constant")]
    UndefinedCorrelation,

    #[error("system id sets differ (missing from second: [{}]; extra in second: [{}])", missing.join(", "), extra.join(", "))]
    IdSetMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: file is not valid UTF-8", path.display())]
    InvalidUtf8 { path: PathBuf },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}
