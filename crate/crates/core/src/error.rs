use thiserror::Error;

use crate::event::{Event, Trace};

#[derive(Debug, Error)]
pub enum Error {
    #[error("state `{0}` is not declared")]
    UnknownState(String),

    #[error("event `{0}` is not in the alphabet")]
    UnknownEvent(Event),

    #[error("duplicate state id `{0}`")]
    DuplicateState(String),

    #[error("nondeterministic transition: state `{state}` has two successors on `{event}`")]
    Nondeterministic { state: String, event: Event },

    #[error("generator has states but no initial state")]
    MissingInitial,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("events {events:?} overlap the alphabet")]
    SilentOverlap { events: Vec<Event> },

    #[error("plant is blocking: string `{0}` cannot be extended to a marked string")]
    BlockingPlant(Trace),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(String),

    #[error("at least one agent is required")]
    NoAgents,

    #[error("{inner} is not a sublanguage of {outer}: `{witness}` is marked by the former only")]
    NotSublanguage {
        inner: &'static str,
        outer: &'static str,
        witness: Trace,
    },

    #[error("enumeration budget exceeded: {transitions} transitions > budget {budget}")]
    BudgetExceeded { transitions: usize, budget: usize },

    #[error("local supervisor conflict for agent `{agent}`: {detail}")]
    SupervisorConflict { agent: String, detail: String },

    #[error("iteration did not converge within {0} passes")]
    NoConvergence(usize),

    #[error("unsupported format version {0}")]
    FormatVersion(u32),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
