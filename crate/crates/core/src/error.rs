use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("algebra `{0}` has no involution")]
    MissingInvolution(String),

    #[error("element `{0}` is not idempotent")]
    NotIdempotent(String),

    #[error("idempotent conditions violated: {0}")]
    IdempotentConditions(String),

    #[error("algebra is already unital")]
    AlreadyUnital,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("generator `{label}` lies outside its declared {side} component")]
    GeneratorOutsideComponent { label: String, side: String },

    #[error("word budget of {cap} exceeded")]
    BudgetExceeded { cap: usize },

    #[error("{what}: search cap {cap} exceeded")]
    CapExceeded { what: String, cap: usize },

    #[error("closure post-check failed: {0}")]
    NotClosed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
