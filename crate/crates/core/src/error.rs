use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported extension degree m = {0}")]
    UnsupportedField(u32),
    #[error("polynomial {0:#b} is not primitive")]
    NotPrimitive(u16),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("expected {expected} symbols, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("symbol {0} is outside the field")]
    SymbolOutOfRange(usize),
    #[error("{erasures} erasures exceed the correction capacity {capacity}")]
    TooManyErasures { erasures: usize, capacity: usize },
    #[error("position {0} is out of range or repeated")]
    BadPosition(usize),
    #[error("invalid decoder parameters: {0}")]
    InvalidParameters(String),
    #[error("frozen symbol u[{0}] is nonzero")]
    FrozenViolation(usize),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("exact decoding needs {needed} kernel evaluations, above the limit {limit}")]
    ResourceGuard { needed: u128, limit: u128 },
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
