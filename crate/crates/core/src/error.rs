use crate::expr::EvalError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {offset}: expected one of {expected:?}, found {found:?}")]
    Parse { offset: usize, expected: Vec<String>, found: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid class member: {0}")]
    InvalidMember(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("sampling exhausted: needed {needed} regular points, found {got}")]
    SamplingExhausted { needed: usize, got: usize },
    #[error("verification routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("transformations are not composable: target {left} differs from source {right}")]
    NotComposable { left: String, right: String },
    #[error("point transformation carries no inverse")]
    MissingInverse,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("solver fields failed symbolic confirmation after {attempts} sampling attempts")]
    Unconfirmed { attempts: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
