//! Domain objects of a reputation-network MDP and the reputation-conditioned
//! transition lookups.
//!
//! All objects are plain data: immutable once built, `Send + Sync`, and every
//! lookup is a pure function.

mod ids;
mod knowledge;
mod system;
mod transition;
mod validate;

pub use ids::{ActionId, ActionKind, AgentId, StateId};
pub use knowledge::{
    ActionDistribution, AgentKnowledge, EpistemicState, Hyperparameters, ImageFunction,
    ReputationCurve, SubjectiveTransitionSpec, UpdateScope,
};
pub use system::{
    counterpart, Action, CounterpartMap, ImageUpdateRule, ImpactTable, ObjectiveTransitions, System,
};
pub use transition::{
    evaluated_action, global_row, global_transition, subjective_probability, subjective_row,
};
pub(crate) use transition::{evaluated_with_spec, likelihood_row, row_with_spec};
pub use validate::{validate_system, ValidationReport, Violation};
