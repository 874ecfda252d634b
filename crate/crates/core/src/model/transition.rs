//! Transition lookups: reputation-conditioned subjective rows and the global
//! transition model that dispatches on the action kind.

use crate::error::{ModelError, Result};

use super::ids::{ActionId, ActionKind, AgentId, StateId};
use super::knowledge::{AgentKnowledge, SubjectiveTransitionSpec};
use super::system::System;

/// Renormalized subjective row at reputation `r`, as `(destination,
/// probability)` pairs in state order.
pub fn subjective_row(
    spec: &SubjectiveTransitionSpec,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    r: f64,
) -> Result<Vec<(StateId, f64)>> {
    let curves = spec.row(actor, s, a).filter(|c| !c.is_empty()).ok_or(
        ModelError::UndefinedSubjectiveRow {
            agent: actor,
            state: s,
            action: a,
        },
    )?;
    let raw: Vec<(StateId, f64)> = curves.iter().map(|(&d, c)| (d, c.value_at(r))).collect();
    let total: f64 = raw.iter().map(|(_, p)| p).sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(ModelError::ZeroSubjectiveMass {
            agent: actor,
            state: s,
            action: a,
            reputation: r,
        });
    }
    Ok(raw.into_iter().map(|(d, p)| (d, p / total)).collect())
}

/// `ST_g(h, s, a, s', r)`: the curve for `s'` interpolated at `r`, divided by
/// the row total at `r`. Destinations without a curve have probability 0.
pub fn subjective_probability(
    spec: &SubjectiveTransitionSpec,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    dest: StateId,
    r: f64,
) -> Result<f64> {
    let row = subjective_row(spec, actor, s, a, r)?;
    Ok(row
        .iter()
        .find(|(d, _)| *d == dest)
        .map_or(0.0, |(_, p)| *p))
}

/// Dense transition row of the global model `T_g(h, s, a, ·, r)`.
///
/// Subjective actions read `g`'s curves at reputation `r`; objective actions
/// read the objective table and ignore `r`.
pub fn global_row(
    system: &System,
    knowledge: &AgentKnowledge,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    r: f64,
) -> Result<Vec<f64>> {
    row_with_spec(system, &knowledge.subjective, actor, s, a, r)
}

pub(crate) fn row_with_spec(
    system: &System,
    spec: &SubjectiveTransitionSpec,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    r: f64,
) -> Result<Vec<f64>> {
    match system.action_kind(a)? {
        ActionKind::Objective => system
            .objective()
            .row(actor, s, a)
            .map(<[f64]>::to_vec)
            .ok_or(ModelError::UndefinedObjectiveRow {
                agent: actor,
                state: s,
                action: a,
            }),
        ActionKind::Subjective => {
            let mut row = vec![0.0; system.state_count()];
            for (d, p) in subjective_row(spec, actor, s, a, r)? {
                row[d.0] = p;
            }
            Ok(row)
        }
    }
}

/// `T_g(h, s, a, s', r)`.
pub fn global_transition(
    system: &System,
    knowledge: &AgentKnowledge,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    dest: StateId,
    r: f64,
) -> Result<f64> {
    system.check_state(dest)?;
    match system.action_kind(a)? {
        ActionKind::Objective => {
            global_row(system, knowledge, actor, s, a, r).map(|row| row[dest.0])
        }
        ActionKind::Subjective => {
            subjective_probability(&knowledge.subjective, actor, s, a, dest, r)
        }
    }
}

/// Like [`global_row`], but a row the model leaves undefined counts as
/// "this action cannot produce any observed transition" and yields `None`.
pub(crate) fn likelihood_row(
    system: &System,
    spec: &SubjectiveTransitionSpec,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    r: f64,
) -> Result<Option<Vec<f64>>> {
    match row_with_spec(system, spec, actor, s, a, r) {
        Ok(row) => Ok(Some(row)),
        Err(
            ModelError::UndefinedObjectiveRow { .. } | ModelError::UndefinedSubjectiveRow { .. },
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The action actually evaluated when `owner` plans with objective action
/// `a` in state `s`: its counterpart when one exists and the owner has
/// subjective curves for it there, otherwise `a` itself.
pub fn evaluated_action(
    system: &System,
    knowledge: &AgentKnowledge,
    s: StateId,
    a: ActionId,
) -> ActionId {
    evaluated_with_spec(system, &knowledge.subjective, knowledge.owner, s, a)
}

pub(crate) fn evaluated_with_spec(
    system: &System,
    spec: &SubjectiveTransitionSpec,
    owner: AgentId,
    s: StateId,
    a: ActionId,
) -> ActionId {
    match system.counterparts().get(a) {
        Some(sub) if spec.row(owner, s, sub).is_some() => sub,
        _ => a,
    }
}
