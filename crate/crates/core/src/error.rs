use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero ideal: every input polynomial is zero")]
    ZeroIdeal,
    #[error("variable mismatch: `{0}` vs `{1}`")]
    VariableMismatch(String, String),
    #[error("divisor is not monic")]
    NotMonic,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value supplied for `{0}`")]
    MissingValue(String),
    #[error("denominator vanishes at the point (offending coordinate `{0}`)")]
    DenominatorVanishes(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ideal has infinite colength")]
    InfiniteColength,
    #[error("ideal is not supported at the origin")]
    NotSupportedAtOrigin,
    #[error("generator `{0}` is not homogeneous in y")]
    NotHomogeneous(String),
    #[error("no further blowup at index {index}: current remainder degree is zero")]
    NoFurtherBlowup { index: usize },
    #[error("substitution Jacobian is singular")]
    SingularJacobian,
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
