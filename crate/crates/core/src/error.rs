use thiserror::Error;

use crate::space::SpaceSig;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature mismatch in {context}: {left} vs {right}")]
    SignatureMismatch {
        context: String,
        left: SpaceSig,
        right: SpaceSig,
    },
    #[error("{what} is not idempotent: e(e(e_{column})) differs from e(e_{column})")]
    NotIdempotent { what: String, column: usize },
    #[error("morphism does not equalize the pair (column {column})")]
    DoesNotEqualize { column: usize },
    #[error("morphism does not coequalize the pair (column {column})")]
    DoesNotCoequalize { column: usize },
    #[error("{what} is not invertible: {rows}x{cols} map of rank {rank}")]
    NotInvertible {
        what: String,
        rows: usize,
        cols: usize,
        rank: usize,
    },
    #[error("not a weak Hopf quasigroup: {failed} failed")]
    NotAWhq { failed: String },
    #[error("multiplication of {what} is not associative at ({a}, {b}, {c})")]
    AssociativityFailure {
        what: String,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("factorization failed: {0}")]
    FactorizationFailure(String),
    #[error("the inverse of the canonical morphism is not almost lineal")]
    AlmostLinealityRequired,
    #[error("structure is not a Hopf quasigroup (target and source maps are not the counit composite)")]
    NotAHopfQuasigroup,
    #[error("not a loop: {0}")]
    NotALoop(String),
    #[error("inverse property fails at ({x}, {y})")]
    IPVerificationFailed { x: usize, y: usize },
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("generated structure fails axiom {0}")]
    AxiomVerificationFailed(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("unknown name {name:?} at line {line}, column {col}")]
    UnknownName { name: String, line: usize, col: usize },
    #[error("arity mismatch at line {line}, column {col}: {left} does not compose with {right}")]
    ArityMismatch {
        line: usize,
        col: usize,
        left: SpaceSig,
        right: SpaceSig,
    },
    #[error("{0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Input errors (bad files, syntax, typing) as opposed to failed verifications.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::SyntaxError { .. }
                | Error::UnknownName { .. }
                | Error::ArityMismatch { .. }
                | Error::Format(_)
                | Error::Io(_)
                | Error::SignatureMismatch { .. }
                | Error::InvalidGroupoid(_)
        )
    }
}
