use crate::cover::CoverSolution;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("word has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("symbol index {symbol} out of range for alphabet size {k}")]
    BadSymbol { symbol: u32, k: u32 },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: u64, limit: u64 },
    #[error("k^ell exceeds the universe cap of 2^40 (k={k}, ell={ell})")]
    ParamsTooLarge { k: u32, ell: u32 },
    #[error("operands have mismatched parameters")]
    ParamsMismatch,
    #[error("operation undefined for the empty language")]
    EmptyLanguage,
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton violates rank discipline")]
    NotRanked,
    #[error("bit vectors have mismatched widths")]
    WidthMismatch,
    #[error("no subset of the candidates covers target {target}")]
    Infeasible { target: String },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded {
        nodes: u64,
        /// Best cover found before the budget ran out (never certified).
        best: Box<CoverSolution>,
    },
    #[error("x must be 0 or 1, got {got}")]
    BadParity { got: u32 },
    #[error("unknown witness family `{0}`")]
    UnknownFamily(String),
    #[error("{0}")]
    Invalid(String),
    #[error("unsupported automaton shape: {0}")]
    UnsupportedAutomaton(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
