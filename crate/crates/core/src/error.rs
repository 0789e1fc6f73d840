use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("substitution makes the denominator vanish identically")]
    VanishingDenominator,

    #[error("operators live in different Ore algebras ({left} vs {right})")]
    RuleMismatch { left: String, right: String },

    #[error("{0}")]
    InvalidOperator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("ad-exponential did not terminate within {bound} iterations")]
    NilpotencyExceeded { bound: usize },

    #[error("relation check failed: {0}")]
    RelationFailed(String),

    #[error("factorization L = Q theta^-1 P does not hold")]
    FactorizationFailed,

    #[error("b(L) does not match the supplied f: {0}")]
    SpectralMismatch(String),

    #[error("chain step {index} failed: {source}")]
    ChainStep { index: usize, source: Box<Error> },

    #[error("recursion pivot vanishes at index {index}")]
    RecursionPivot { index: i64 },

    #[error("reliable window is empty: {0}")]
    EmptyWindow(String),

    #[error("{0}")]
    Wave(String),

    #[error("{0}")]
    Format(String),

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
}

impl Error {
    /// Malformed input as opposed to a failed or impossible computation.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::UnknownSymbol(_)
            | Error::UnknownGenerator(_)
            | Error::Format(_) => true,
            Error::AtLine { source, .. } | Error::ChainStep { source, .. } => source.is_usage(),
            _ => false,
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
