use thiserror::Error;

use crate::arith::FieldElement;
use crate::multipoly::MultiPoly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("attempted to invert zero")]
    ZeroInversion,
    #[error("modulus {0} is not a supported word-size prime")]
    BadModulus(u64),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operands live over different coefficient fields")]
    FieldMismatch,
    #[error("polynomial is not monic in y")]
    NotMonicInY,
    #[error("ideal is not zero-dimensional: no leading monomial is a pure power of variable {0}")]
    NotZeroDimensional(usize),
    #[error("input is not a Groebner basis: {0}")]
    NotGroebner(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular { kernel: Vec<FieldElement> },
    /// `element * annihilator` lies in the ideal although neither factor does.
    #[error("ideal is not maximal: found a zero divisor in the quotient")]
    NotMaximalIdeal {
        element: MultiPoly,
        annihilator: MultiPoly,
    },
    #[error("inseparable input: a p-th power factor appeared in characteristic {0}")]
    InseparableInput(u64),
    #[error("recursion limit {0} reached")]
    RecursionLimit(usize),
    #[error("exhausted the deterministic grid of linear forms")]
    ExhaustedGrid,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 1 input error, 2 mathematical rejection, 3 internal limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotMaximalIdeal { .. } | Error::InseparableInput(_) | Error::ZeroInversion => 2,
            Error::RecursionLimit(_)
            | Error::ExhaustedGrid
            | Error::Singular { .. }
            | Error::NotSquare { .. }
            | Error::DivisionByZeroPoly => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
