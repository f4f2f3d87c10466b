use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid jet space: {0}")]
    InvalidSpace(String),

    #[error("substituted expression for field `{0}` mentions the field itself")]
    RecursiveSubstitution(String),

    #[error("parameter `{0}` has no value")]
    UnboundParameter(String),

    #[error("division by zero while evaluating `{0}`")]
    DivisionByZero(String),

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("form of degree {degree} is not a {expected}-form")]
    DegreeError { degree: usize, expected: String },

    #[error("unsupported Lagrangian order {0} (at most 2 is supported)")]
    UnsupportedOrder(usize),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("obstruction is not a total divergence (Euler-Lagrange expressions do not vanish)")]
    NotExact,

    #[error("density is not a null Lagrangian")]
    NotNull,

    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),

    #[error("elimination failed: {0}")]
    EliminationFailure(String),

    #[error("invalid vector field: {0}")]
    InvalidVectorField(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("jet `{symbol}` has order {depth}, exceeding the declared order {order}")]
    DepthExceeded {
        symbol: String,
        depth: usize,
        order: usize,
    },
}

impl Error {
    /// True for errors raised while reading user input (DSL or spec files).
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::DepthExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
