use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not a product of cyclotomics: remainder {0}")]
    NotCyclotomicProduct(String),
    #[error("modulus {ell} divides q = {q}")]
    BadModulus { q: i64, ell: i64 },
    #[error("invalid group label: {0}")]
    InvalidLabel(String),
    #[error("exhaustive enumeration refused at this scale: {0}")]
    ScaleLimit(String),
    #[error("no e-cuspidality data for component {component} at e = {e}")]
    UnsupportedComponent { component: String, e: u32 },
    #[error("schema error at {file}:{line}: {msg}")]
    Schema {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("table data admits no positive integer solution: {0}")]
    InconsistentTable(String),
    #[error("no solution within the certified bounds")]
    NoSolution,
    #[error("search budget exceeded (certified bound {0})")]
    SearchBudgetExceeded(u64),
    #[error("candidate support exceeds the orbit: {0}")]
    AmbiguousSupport(String),
    #[error("no table line for case {0}")]
    MissingLine(String),
    #[error("inadmissible (ell, q) pair: {0}")]
    InadmissiblePair(String),
    #[error("orbit sizes do not sum to the label count")]
    InconsistentOrbits,
    #[error("no Ennola partner embedded for {0}")]
    NoPartner(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
