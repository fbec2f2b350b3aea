use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::UnknownName(_) => 1,
            Error::Precondition(_) | Error::Dimension { .. } | Error::Axiom(_) => 2,
            Error::BudgetExceeded(_) => 3,
            Error::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Precondition(_) => "precondition",
            Error::BudgetExceeded(_) => "budget",
            Error::Verification(_) => "verification",
            Error::Dimension { .. } => "dimension",
            Error::UnknownName(_) => "unknown_name",
            Error::Axiom(_) => "axiom",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on search nodes; `FOUNDRY_BUDGET` overrides it.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

pub fn default_budget() -> u64 {
    std::env::var("FOUNDRY_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
