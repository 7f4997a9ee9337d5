use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a poset: cycle through element `{0}`")]
    Cycle(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("subset is not an order ideal: {0} < {1} but {0} is missing")]
    NotAnIdeal(String, String),
    #[error("lattice containment violated: {0}")]
    NotContained(String),
    #[error("map is not well defined on subquotients: {0}")]
    InvalidMap(String),
    #[error("chain complex invalid: {0}")]
    InvalidComplex(String),
    #[error("chain map does not commute with differentials in degree {0}")]
    NotAChainMap(i64),
    #[error("diagram is not functorial: paths from `{0}` to `{1}` disagree")]
    NotFunctorial(String, String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("poset exceeds configured element cap ({0} > {1})")]
    TooLarge(usize, usize),
    #[error("conditions (P1)/(P2) fail; refusing equivalence check: {0}")]
    ConditionsFail(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
