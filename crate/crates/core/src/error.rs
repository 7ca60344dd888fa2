use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("the zero element has no principal symbol")]
    ZeroElement,

    #[error("expected a polynomial (no ∂ factors), got `{0}`")]
    NotPolynomial(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("index {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid module model: {0}")]
    InvalidModel(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rule `{rule}` does not decrease the term order on `{monomial}`")]
    RuleNotDecreasing { rule: String, monomial: String },

    #[error("invalid group action: {0}")]
    InvalidGroup(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("malformed curve spec: {0}")]
    MalformedSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
