use thiserror::Error;

/// Errors raised by the exact-arithmetic and Witt-group layers.
///
/// Every error is a domain error: the inputs were well formed Rust values
/// but violated a mathematical precondition. Nothing here is recoverable
/// by retrying; callers should surface the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("zero denominator in rational function")]
    ZeroDenominator,
    #[error("form entry must be a nonzero field element")]
    ZeroEntry,
    #[error("base field mismatch: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("operation requires base field {expected}, form is over {found}")]
    WrongField { expected: String, found: String },
    #[error("unsupported entry: {0}")]
    UnsupportedEntry(String),
    #[error("form is not certified in the required fundamental-ideal power I^{0}")]
    NotInFundamentalPower(u32),
    #[error("level must be at least 3 over Q, got {0}")]
    BelowStableRange(u32),
    #[error("place {0} is not valid here")]
    InvalidPlace(String),
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a complex: composition of consecutive differentials is nonzero at position {0}")]
    NotAComplex(usize),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid extension presentation: {0}")]
    InvalidExtension(String),
    #[error("page is not in the expected shape: {0}")]
    BadPageShape(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
