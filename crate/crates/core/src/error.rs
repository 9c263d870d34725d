use alloc::string::String;
use thiserror::Error;

/// Errors raised while building or evaluating ternary functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("component {value} at position {position} is not one of 0, 1, 2")]
    BadComponent { position: usize, value: u8 },
    #[error("layer (e={e}, d={d}) does not sum to arity {arity}")]
    LayerArity { arity: usize, e: usize, d: usize },
    #[error("one-layer value {value} is outside 0..={arity}")]
    OneLayerOutOfRange { arity: usize, value: usize },
    #[error("table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table value {value} at index {index} is not one of 0, 1, 2")]
    BadTableValue { index: usize, value: u8 },
    #[error("arity {arity} exceeds the table cap {cap}")]
    ArityCap { arity: usize, cap: usize },
    #[error("expected a tuple of length {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable x{index} is not bound by an assignment of length {arity}")]
    UnboundVariable { index: usize, arity: usize },
    #[error("variable indices start at 1")]
    ZeroVariable,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{name}` takes {expected} arguments, got {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("generator `{0}` is defined twice")]
    DuplicateGenerator(String),
    #[error("`{0}` is not a valid generator name")]
    BadName(String),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} is outside the permutation domain 1..={len}")]
    PermutationDomain { index: usize, len: usize },
    #[error("images do not form a permutation of 1..={0}")]
    NotBijective(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("intermediate function is not zero exactly at the reference tuple: {0}")]
    Uniqueness(String),
    #[error("witness disagrees with the target at tuple {tuple:?}: formula gives {got}, target {expected}")]
    Verification {
        tuple: alloc::vec::Vec<u8>,
        expected: u8,
        got: u8,
    },
    #[error("target arity {arity} exceeds the witness cap {cap} and cannot be verified")]
    Unverifiable { arity: usize, cap: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("members {0} and {1} are congruent")]
    CongruentPair(String, String),
    #[error("family constraint violated: {0}")]
    Family(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rewriting changed the realized function at tuple {0:?}")]
    SemanticChange(alloc::vec::Vec<u8>),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Core(#[from] CoreError),
}
