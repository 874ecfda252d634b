//! Online look-ahead planning over epistemic states.
//!
//! The search expands a full AND/OR tree: state nodes carry an
//! [`EpistemicState`], action nodes branch on every successor state with
//! positive probability. Leaves are scored with the one-step heuristic
//! `max_a PI`, so a depth-`D` tree computes the horizon-`D + 1` value.
//!
//! Only objective actions are root choices. An objective action whose
//! subjective counterpart has curves in the owner's model is evaluated under
//! those curves, but reported under its objective identity.

mod oracle;

pub use oracle::expectimax_oracle;

use crate::error::{ModelError, Result};
use crate::estimation::{estimate_parts, image_estimate, reputation};
use crate::model::{
    evaluated_with_spec, row_with_spec, ActionDistribution, ActionId, AgentId, AgentKnowledge,
    EpistemicState, Hyperparameters, StateId, SubjectiveTransitionSpec, System, UpdateScope,
};

/// Perceived immediate impact on `g` of performing `a` in `s`: own
/// self-impact plus the impact the rest of the network is expected to cause,
/// averaged over the network size.
pub fn perceived_impact(
    system: &System,
    g: AgentId,
    s: StateId,
    ad: &ActionDistribution,
    a: ActionId,
) -> f64 {
    (system.impact(g, g, s, a) + network_impact(system, g, s, ad)) / system.agent_count() as f64
}

fn network_impact(system: &System, g: AgentId, s: StateId, ad: &ActionDistribution) -> f64 {
    system
        .agents()
        .filter(|&h| h != g)
        .map(|h| {
            let row = ad.row(h, s);
            system
                .actions()
                .map(|a| system.impact(g, h, s, a) * row[a.0])
                .sum::<f64>()
        })
        .sum()
}

/// `max_a PI` over the actions `g` can take in the node's state; 0 when it
/// has none.
pub fn leaf_heuristic(system: &System, g: AgentId, theta: &EpistemicState) -> f64 {
    let net = network_impact(system, g, theta.state, &theta.ad);
    let n = system.agent_count() as f64;
    system
        .available_actions(g, theta.state)
        .into_iter()
        .map(|a| (system.impact(g, g, theta.state, a) + net) / n)
        .fold(None, |best: Option<f64>, v| {
            Some(best.map_or(v, |b| b.max(v)))
        })
        .unwrap_or(0.0)
}

/// The epistemic state reached when the environment moves from
/// `theta.state` to `next`: the action distribution conditioned on the
/// transition (only the owner's own row, since the owner is the one acting
/// inside its look-ahead) and the image updated in the pre-transition state.
pub fn successor_epistemic(
    system: &System,
    knowledge: &AgentKnowledge,
    theta: &EpistemicState,
    next: StateId,
    hyper: &Hyperparameters,
) -> Result<EpistemicState> {
    Search::new(system, knowledge, hyper).successor(theta, next)
}

/// `q(theta, a)` with `depth` levels below the action node.
pub fn q_value(
    system: &System,
    knowledge: &AgentKnowledge,
    theta: &EpistemicState,
    a: ActionId,
    depth: usize,
    hyper: &Hyperparameters,
) -> Result<f64> {
    assert!(depth >= 1, "q_value needs at least one level of look-ahead");
    let search = Search::new(system, knowledge, hyper);
    let node = search.action_node(theta, a, depth)?;
    Ok(node.q)
}

/// Outcome of one planning call.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    /// Highest-valued objective action; ties go to the lowest index.
    pub chosen: ActionId,
    pub value: f64,
    /// One entry per available objective action, in index order.
    pub q_values: Vec<(ActionId, f64)>,
}

impl PlanResult {
    pub fn q(&self, a: ActionId) -> Option<f64> {
        self.q_values.iter().find(|(b, _)| *b == a).map(|(_, q)| *q)
    }
}

/// Plans from `theta` with look-ahead depth `hyper.depth`.
pub fn plan(
    system: &System,
    knowledge: &AgentKnowledge,
    theta: &EpistemicState,
    hyper: &Hyperparameters,
) -> Result<PlanResult> {
    let root = expand(system, knowledge, theta, hyper)?;
    let chosen = root.best_action().ok_or(ModelError::NoAvailableAction {
        agent: knowledge.owner,
        state: theta.state,
    })?;
    Ok(PlanResult {
        chosen,
        value: root.value,
        q_values: root.actions.iter().map(|x| (x.action, x.q)).collect(),
    })
}

/// Builds the full look-ahead tree of depth `hyper.depth` rooted at `theta`.
pub fn expand(
    system: &System,
    knowledge: &AgentKnowledge,
    theta: &EpistemicState,
    hyper: &Hyperparameters,
) -> Result<SearchNode> {
    Search::new(system, knowledge, hyper).node(theta.clone(), hyper.depth)
}

/// A state (OR) node of the look-ahead tree.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub theta: EpistemicState,
    pub depth_remaining: usize,
    pub value: f64,
    pub actions: Vec<ActionNode>,
    /// Child state nodes, shared by every action that reaches them. Empty at
    /// leaves.
    pub successors: Vec<(StateId, SearchNode)>,
}

impl SearchNode {
    pub fn is_leaf(&self) -> bool {
        self.depth_remaining == 0
    }

    pub fn best_action(&self) -> Option<ActionId> {
        argmax(self.actions.iter().map(|x| (x.action, x.q))).map(|(a, _)| a)
    }

    /// Number of state nodes in the subtree, this one included.
    pub fn size(&self) -> usize {
        1 + self.successors.iter().map(|(_, n)| n.size()).sum::<usize>()
    }
}

/// An action (AND) node.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionNode {
    pub action: ActionId,
    /// The action whose transitions were used: the subjective counterpart
    /// when one applies, otherwise `action` itself.
    pub evaluated_as: ActionId,
    pub immediate: f64,
    pub q: f64,
    /// Successor states with positive probability. Empty at leaves.
    pub transitions: Vec<(StateId, f64)>,
}

/// First maximum in iteration order, so lower action indices win ties when
/// actions are visited in index order.
fn argmax(items: impl Iterator<Item = (ActionId, f64)>) -> Option<(ActionId, f64)> {
    items.fold(None, |best, (a, q)| match best {
        Some((_, bq)) if q <= bq => best,
        _ => Some((a, q)),
    })
}

struct Search<'a> {
    system: &'a System,
    subjective: &'a SubjectiveTransitionSpec,
    owner: AgentId,
    hyper: &'a Hyperparameters,
}

impl<'a> Search<'a> {
    fn new(system: &'a System, knowledge: &'a AgentKnowledge, hyper: &'a Hyperparameters) -> Self {
        Self {
            system,
            subjective: &knowledge.subjective,
            owner: knowledge.owner,
            hyper,
        }
    }

    fn successor(&self, theta: &EpistemicState, next: StateId) -> Result<EpistemicState> {
        let ad = estimate_parts(
            self.system,
            self.subjective,
            self.owner,
            &theta.ad,
            &theta.img,
            theta.state,
            next,
            self.hyper.eta,
            UpdateScope::Restricted,
            self.owner,
        )?
        .distribution;
        let img = image_estimate(
            self.system,
            &theta.img,
            theta.state,
            &theta.ad,
            self.hyper.delta,
        );
        Ok(EpistemicState {
            state: next,
            ad,
            img,
        })
    }

    /// Transition row used for `a` in `theta`, with the action it came from.
    fn transitions(&self, theta: &EpistemicState, a: ActionId) -> Result<(ActionId, Vec<f64>)> {
        let r = reputation(self.owner, self.owner, &theta.img);
        let eval = evaluated_with_spec(self.system, self.subjective, self.owner, theta.state, a);
        let row = row_with_spec(
            self.system,
            self.subjective,
            self.owner,
            theta.state,
            eval,
            r,
        )?;
        Ok((eval, row))
    }

    fn action_node(&self, theta: &EpistemicState, a: ActionId, depth: usize) -> Result<ActionNode> {
        let immediate = perceived_impact(self.system, self.owner, theta.state, &theta.ad, a);
        let (evaluated_as, row) = self.transitions(theta, a)?;
        let mut transitions = Vec::new();
        let mut future = 0.0;
        for (d, &p) in row.iter().enumerate() {
            if p > 0.0 {
                let child = self.node(self.successor(theta, StateId(d))?, depth - 1)?;
                future += p * child.value;
                transitions.push((StateId(d), p));
            }
        }
        Ok(ActionNode {
            action: a,
            evaluated_as,
            immediate,
            q: immediate + self.hyper.gamma * future,
            transitions,
        })
    }

    fn node(&self, theta: EpistemicState, depth: usize) -> Result<SearchNode> {
        let g = self.owner;
        let s = theta.state;
        let available = self.system.available_actions(g, s);

        if depth == 0 {
            let actions: Vec<ActionNode> = available
                .into_iter()
                .map(|a| {
                    let pi = perceived_impact(self.system, g, s, &theta.ad, a);
                    ActionNode {
                        action: a,
                        evaluated_as: a,
                        immediate: pi,
                        q: pi,
                        transitions: Vec::new(),
                    }
                })
                .collect();
            let value = argmax(actions.iter().map(|x| (x.action, x.q))).map_or(0.0, |(_, q)| q);
            return Ok(SearchNode {
                theta,
                depth_remaining: 0,
                value,
                actions,
                successors: Vec::new(),
            });
        }

        let mut rows = Vec::with_capacity(available.len());
        for &a in &available {
            rows.push(self.transitions(&theta, a)?);
        }

        // Successors depend only on (state, next state), never on the action,
        // so each reachable state is expanded once and shared.
        let mut successors: Vec<(StateId, SearchNode)> = Vec::new();
        for d in self.system.states() {
            if rows.iter().any(|(_, row)| row[d.0] > 0.0) {
                let child = self.node(self.successor(&theta, d)?, depth - 1)?;
                successors.push((d, child));
            }
        }

        let mut actions = Vec::with_capacity(available.len());
        for (&a, (evaluated_as, row)) in available.iter().zip(rows) {
            let immediate = perceived_impact(self.system, g, s, &theta.ad, a);
            let mut future = 0.0;
            let mut transitions = Vec::new();
            for (d, child) in &successors {
                let p = row[d.0];
                if p > 0.0 {
                    future += p * child.value;
                    transitions.push((*d, p));
                }
            }
            actions.push(ActionNode {
                action: a,
                evaluated_as,
                immediate,
                q: immediate + self.hyper.gamma * future,
                transitions,
            });
        }
        let value = argmax(actions.iter().map(|x| (x.action, x.q))).map_or(0.0, |(_, q)| q);
        Ok(SearchNode {
            theta,
            depth_remaining: depth,
            value,
            actions,
            successors,
        })
    }
}
