use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("symbol {symbol} at row {row}, column {col} is outside 0..{q}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: i64,
        q: u8,
    },

    #[error("strength {t} out of range for degree {n}")]
    StrengthOutOfRange { t: usize, n: usize },

    #[error("bad residual selector: {0}")]
    BadSelector(String),

    #[error("operation requires a binary array (q = {0})")]
    NotBinary(u8),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("no exact CAN({t},{n},{q}) available")]
    UnknownCan { t: u32, n: u64, q: u32 },

    #[error("operation does not fit the array: {0}")]
    DomainMismatch(String),

    #[error("search budget of {budget} nodes exceeded{}", checkpoint_note(.checkpoint))]
    BudgetExceeded {
        budget: u64,
        checkpoint: Option<PathBuf>,
    },

    #[error("size {0} too small")]
    SizeTooSmall(u64),

    #[error("degree {0} too small")]
    DegreeTooSmall(u64),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("Hall's condition fails: {} left vertices have only {neighbourhood} neighbours", violator.len())]
    HallViolation {
        violator: Vec<usize>,
        neighbourhood: usize,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("certificate failed: {0}")]
    CertificateFails(String),

    #[error("empty column universe for m = {0}")]
    EmptyUniverse(usize),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("i/o: {0}")]
    Io(String),
}

fn checkpoint_note(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!(" (checkpoint written to {})", p.display()),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
