use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed network spec: {0}")]
    MalformedSpec(String),

    #[error("network spec failed validation: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("file count k = {k} exceeds node count n = {n}")]
    TooManyFiles { k: usize, n: usize },

    #[error("operation requires unit-capacity nodes; expand the spec first")]
    NotUnitCapacity,

    #[error("cost matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("exhaustive assignment is limited to k <= {max}, got k = {k}")]
    AssignmentTooLarge { k: usize, max: usize },

    #[error("file W{0} is stored on no node")]
    FileNotStored(usize),

    #[error("placement is not admissible on the nearest-neighbor graph")]
    NotAdmissible,

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("generator matrix has rank {rank}, expected k = {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("unsupported field order {0}: use a prime or a power of two up to 2^16")]
    UnsupportedField(u64),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("enumeration budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("cannot parse number {0:?}")]
    Number(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
