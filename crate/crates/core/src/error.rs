use thiserror::Error;

use crate::{Label, Step};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid layering: {0}")]
    InvalidLayering(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("unknown node label {0}")]
    InvalidNode(Label),

    #[error("label {label} is outside 1..={max}")]
    InvalidLabel { label: Label, max: usize },

    #[error("invalid line parameters a={a} b={b} for p={p}")]
    InvalidLine { a: usize, b: usize, p: usize },

    #[error("{0} is not prime")]
    InvalidPrime(usize),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(
        "node {node} has only {available} appearances after step {after}, asked for #{requested}"
    )]
    NotEnoughShots {
        node: Label,
        after: Step,
        requested: usize,
        available: usize,
    },

    #[error("sequence does not occur after step {after} within horizon {horizon}")]
    NoOccurrence { after: Step, horizon: Step },

    #[error("node {node} is never scheduled after step {after} within horizon {horizon}")]
    ProtocolIncomplete {
        node: Label,
        after: Step,
        horizon: Step,
    },

    #[error("policy error: {0}")]
    Policy(String),

    #[error("policy never separates ids {ids:?} (depth cap {depth_cap} reached)")]
    PolicyNeverSeparates { ids: Vec<Label>, depth_cap: usize },

    #[error(
        "policy exhausts the shot budget of ids {ids:?} at depth {depth} before separating them"
    )]
    PolicyBudgetDeadlock { ids: Vec<Label>, depth: usize },

    #[error("policy collides: {first} and {second} both transmit at step {step}; sink {sink} is never informed")]
    PolicyCollision {
        first: Label,
        second: Label,
        sink: Label,
        step: Step,
    },

    #[error("policy fails to relay from node {node} within horizon {horizon}")]
    PolicyStalls { node: Label, horizon: Step },

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("transmission tree root is a singleton; no pair to choose")]
    NoPair,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
