use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ModelError, Result, RunError};
use crate::estimation::{action_distribution_estimate, image_estimate, reputation};
use crate::model::{
    ActionDistribution, ActionId, ActionKind, AgentId, AgentKnowledge, Hyperparameters,
    ImageFunction, StateId, System,
};
use crate::planner::plan;
use crate::scenario::Scenario;

use super::metrics::MetricSpec;
use super::schedule::{forced_action, scripted_policy, Controller};

/// Samples the successor of `acting` taking objective action `a` in `s`.
pub fn step_environment<R: Rng + ?Sized>(
    system: &System,
    acting: AgentId,
    s: StateId,
    a: ActionId,
    rng: &mut R,
) -> Result<StateId> {
    if system.action_kind(a)? != ActionKind::Objective {
        return Err(ModelError::NotObjective(a));
    }
    let row = system
        .objective()
        .row(acting, s, a)
        .ok_or(ModelError::UndefinedObjectiveRow {
            agent: acting,
            state: s,
            action: a,
        })?;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for (d, &p) in row.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(d);
        if u < acc {
            return Ok(StateId(d));
        }
    }
    // rounding left `acc` just short of 1
    last.map(StateId).ok_or(ModelError::UndefinedObjectiveRow {
        agent: acting,
        state: s,
        action: a,
    })
}

/// Applies one observed transition to an agent's knowledge: the action
/// distribution is re-estimated and the image updated in the pre-transition
/// state, both from the pre-update knowledge.
pub fn observe_and_learn(
    knowledge: &AgentKnowledge,
    system: &System,
    acting: AgentId,
    s: StateId,
    next: StateId,
    hyper: &Hyperparameters,
) -> Result<AgentKnowledge> {
    let update =
        action_distribution_estimate(system, knowledge, s, next, hyper.eta, hyper.scope, acting)?;
    for (h, row_state) in &update.degenerate_rows {
        log::warn!(
            "agent {}: zero normalizer for AD row ({}, {}) after {} -> {}; row left unchanged",
            system.agent_name(knowledge.owner),
            system.agent_name(*h),
            system.state_name(*row_state),
            system.state_name(s),
            system.state_name(next),
        );
    }
    let img = image_estimate(system, &knowledge.img, s, &knowledge.ad, hyper.delta);
    Ok(AgentKnowledge {
        owner: knowledge.owner,
        subjective: knowledge.subjective.clone(),
        ad: update.distribution,
        img,
    })
}

/// What one planning agent believes after a record.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSnapshot {
    pub owner: AgentId,
    pub ad: ActionDistribution,
    pub img: ImageFunction,
    /// `reputations[h]` is the owner's reputation estimate of agent `h`.
    pub reputations: Vec<f64>,
}

impl AgentSnapshot {
    fn of(k: &AgentKnowledge) -> Self {
        let n = k.img.agent_count();
        Self {
            owner: k.owner,
            ad: k.ad.clone(),
            img: k.img.clone(),
            reputations: (0..n)
                .map(|h| reputation(k.owner, AgentId(h), &k.img))
                .collect(),
        }
    }
}

/// One agent turn.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: usize,
    pub agent: AgentId,
    /// The action applied to the environment.
    pub action: ActionId,
    /// The planner's choice, for planning agents; differs from `action` only
    /// under a mask.
    pub preferred: Option<ActionId>,
    pub state_before: StateId,
    pub state_after: StateId,
    pub root_value: Option<f64>,
    pub q_values: Vec<(ActionId, f64)>,
    /// Knowledge of every planning agent after learning from this turn.
    pub knowledge: Vec<AgentSnapshot>,
}

/// A complete episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub system: System,
    pub metrics: Vec<MetricSpec>,
    pub horizon: usize,
    /// Knowledge of every planning agent before the first turn.
    pub initial: Vec<AgentSnapshot>,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    /// Snapshot of `observer` at the start of step `t` (`t == horizon` gives
    /// the final knowledge).
    pub fn snapshot_at(&self, observer: AgentId, t: usize) -> Option<&AgentSnapshot> {
        let per_step = self.system.agent_count();
        let set = if t == 0 {
            &self.initial
        } else {
            &self.records.get(t * per_step - 1)?.knowledge
        };
        set.iter().find(|k| k.owner == observer)
    }
}

/// Runs `scenario` for `hyper.horizon` steps. Each step, every agent acts
/// once in index order; after each turn every planning agent learns from
/// the observed transition.
pub fn run_episode(
    scenario: &Scenario,
    hyper: &Hyperparameters,
) -> std::result::Result<Trace, RunError> {
    let system = &scenario.system;
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut knowledge: Vec<AgentKnowledge> = scenario
        .agents
        .iter()
        .filter_map(|a| a.knowledge.clone())
        .collect();
    let initial = knowledge.iter().map(AgentSnapshot::of).collect();
    let mut records = Vec::with_capacity(hyper.horizon * system.agent_count());
    let mut s = scenario.start;

    for t in 0..hyper.horizon {
        let at = |source| RunError { t, source };
        for g in system.agents() {
            let setup = &scenario.agents[g.0];
            let (action, preferred, root_value, q_values) = match &setup.controller {
                Controller::Scripted(schedule) => {
                    (scripted_policy(schedule, s, t), None, None, Vec::new())
                }
                Controller::RepNet { mask } => {
                    let k = knowledge
                        .iter()
                        .find(|k| k.owner == g)
                        .ok_or_else(|| at(ModelError::NoKnowledge(g)))?;
                    let result = plan(system, k, &k.epistemic(s), hyper).map_err(at)?;
                    let executed = forced_action(mask, s, t).unwrap_or(result.chosen);
                    (
                        executed,
                        Some(result.chosen),
                        Some(result.value),
                        result.q_values,
                    )
                }
            };
            let next = step_environment(system, g, s, action, &mut rng).map_err(at)?;
            for k in knowledge.iter_mut() {
                *k = observe_and_learn(k, system, g, s, next, hyper).map_err(at)?;
            }
            records.push(TraceRecord {
                t,
                agent: g,
                action,
                preferred,
                state_before: s,
                state_after: next,
                root_value,
                q_values,
                knowledge: knowledge.iter().map(AgentSnapshot::of).collect(),
            });
            s = next;
        }
    }

    Ok(Trace {
        system: system.clone(),
        metrics: scenario.metrics.clone(),
        horizon: hyper.horizon,
        initial,
        records,
    })
}
