use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity mismatch for `{name}`: declared {declared}, applied to {given}")]
    ArityMismatch { name: String, declared: usize, given: usize },

    #[error("invalid signature: {0}")]
    BadSignature(String),

    #[error("axiom `{0}` is not a sentence (free variables: {1})")]
    OpenAxiom(String, String),

    #[error("term is not ground: contains variable `{0}`")]
    NotGround(String),

    #[error("substitution misses free variable `{0}`")]
    MissingSubstitute(String),

    #[error("budget exceeded: {what} needs {need}, limit {limit}")]
    BudgetExceeded { what: &'static str, need: u64, limit: u64 },

    #[error("bit ceiling exceeded: object needs {need} bits, ceiling {ceiling}")]
    CeilingExceeded { need: u64, ceiling: u64 },

    #[error("atom `{0}` lies outside the atom table (formula not available)")]
    AtomOutsideTable(String),

    #[error("expected an open ground formula, got `{0}`")]
    NotOpenGround(String),

    #[error("brute-force search refused: {0} atoms exceeds the cap of 24")]
    BruteRefused(usize),

    #[error("expected a bounded formula: {0}")]
    NotBounded(String),

    #[error("induction body must have exactly one free variable, found {0}")]
    BadInductionBody(usize),

    #[error("tower overflow: {0}")]
    TowerOverflow(String),

    #[error("not enough sample spread: {0}")]
    InsufficientSpread(String),

    #[error("certificate check failed: {0}")]
    BadCertificate(String),

    #[error("invalid evaluation: {0}")]
    BadEvaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
