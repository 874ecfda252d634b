use thiserror::Error;

use crate::model::{ActionId, AgentId, StateId};

/// Errors raised by model lookups, planning and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown agent {0}")]
    UnknownAgent(AgentId),

    #[error("unknown state {0}")]
    UnknownState(StateId),

    #[error("unknown action {0}")]
    UnknownAction(ActionId),

    #[error("no objective transition row for agent {agent}, state {state}, action {action}")]
    UndefinedObjectiveRow {
        agent: AgentId,
        state: StateId,
        action: ActionId,
    },

    #[error("no subjective curves for agent {agent}, state {state}, action {action}")]
    UndefinedSubjectiveRow {
        agent: AgentId,
        state: StateId,
        action: ActionId,
    },

    #[error(
        "subjective row for agent {agent}, state {state}, action {action} has zero mass at reputation {reputation}"
    )]
    ZeroSubjectiveMass {
        agent: AgentId,
        state: StateId,
        action: ActionId,
        reputation: f64,
    },

    #[error("agent {agent} has no available action in state {state}")]
    NoAvailableAction { agent: AgentId, state: StateId },

    #[error("objective transition row length {found} does not match {expected} states")]
    RowLength { expected: usize, found: usize },

    #[error("action {0} is not objective")]
    NotObjective(ActionId),

    #[error("action {0} is not subjective")]
    NotSubjective(ActionId),

    #[error("agent {0} has no knowledge (not a RepNet agent)")]
    NoKnowledge(AgentId),
}

/// A model error raised while running an episode, tagged with the time-step.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("time-step {t}: {source}")]
pub struct RunError {
    pub t: usize,
    #[source]
    pub source: ModelError,
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
