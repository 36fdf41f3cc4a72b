use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be an integer in [2, 2^32), got {0}")]
    InvalidModulus(u64),
    #[error("modulus mismatch: Z/{0} vs Z/{1}")]
    ModulusMismatch(u64, u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),
    #[error("invalid short exact sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("infinite path set between `{0}` and `{1}`: a cycle is reachable")]
    InfinitePaths(String, String),
    #[error("quiver has a directed cycle; {0} needs finite path sets")]
    CyclicQuiver(&'static str),
    #[error("not a subquiver: {0}")]
    NotSubquiver(String),
    #[error("representations live on different quivers or rings")]
    Incompatible,
    #[error("morphism is not natural at arrow `{0}`")]
    NotNatural(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("resolution depth {0} exhausted without reaching zero or a repeated syzygy")]
    DepthExhausted(usize),
    #[error("no instance satisfying the constraints after {0} attempts")]
    RejectionBudget(usize),
    #[error("input error in `{field}`: {message}")]
    Input { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input { field: field.into(), message: message.into() }
    }
}
