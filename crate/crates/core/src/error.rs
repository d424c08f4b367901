use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: relation referencing earlier-or-equal generators ({detail})")]
    RelationSupport { line: usize, detail: String },

    #[error("line {line}: exponent {exponent} out of range [0, {p})")]
    ExponentRange { line: usize, exponent: u64, p: u32 },

    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),

    #[error("enumeration cap exceeded: {what} needs more than {cap} elements")]
    CapExceeded { what: String, cap: usize },

    #[error("subgroup is not abelian")]
    NotAbelian,

    #[error("KG not Lie nilpotent: {0}")]
    NotLieNilpotent(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported item {0}")]
    UnsupportedItem(u32),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
