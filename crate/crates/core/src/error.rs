use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("header declares {declared} edges but {found} were read")]
    HeaderMismatch { declared: usize, found: usize },

    #[error("{what}: n = {n} exceeds the exact-search limit {limit}")]
    SizeLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("independent-set enumeration exceeded the limit of {limit} sets")]
    EnumerationLimit { limit: usize },

    #[error("requested {requested} edges but only {available} non-edges exist")]
    BudgetTooLarge { requested: usize, available: usize },

    #[error("independent-set family is empty")]
    EmptyFamily,

    #[error("analytic profile has no {0}")]
    MissingProfileValue(&'static str),

    #[error("vertex {vertex} has no color")]
    MissingColor { vertex: usize },

    #[error("search budget of {budget} candidate sets exhausted")]
    SearchBudget { budget: u64 },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
