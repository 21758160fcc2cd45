use thiserror::Error;

use crate::profile::Item;

/// Errors raised by the model, the solvers and the generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PidError {
    #[error("profile has no agents")]
    NoAgents,

    #[error("agent {agent}: item {item} is listed more than once")]
    DuplicateItemInList { agent: String, item: Item },

    #[error("agent {agent}: item {item} is missing from the preference list")]
    MissingItem { agent: String, item: Item },

    #[error("{}unknown item {item}", agent.as_ref().map(|a| format!("agent {a}: ")).unwrap_or_default())]
    UnknownItem { agent: Option<String>, item: Item },

    #[error("expected {expected} agents, found {found}")]
    WrongAgentCount { expected: usize, found: usize },

    #[error("cut {cut} for agent {agent} exceeds its list length {len}")]
    InvalidCut {
        agent: usize,
        cut: usize,
        len: usize,
    },

    #[error("prefix of size {cuts:?} has neither straight nor slant shape")]
    IrregularShape { cuts: Vec<usize> },

    #[error("profile has no items")]
    EmptyProfile,

    #[error("item {0} does not occur in the prefix")]
    ItemOutsidePrefix(Item),

    #[error("instance has {size} items, above the configured cap of {cap}")]
    InstanceTooLarge { size: usize, cap: usize },

    #[error("construction assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = PidError> = std::result::Result<T, E>;
