//! Brute-force finite-horizon value by direct recursion on the optimality
//! equations. No sharing of subtrees, no reuse of successor states: every
//! (action, next state) pair recomputes its own epistemic successor.
//! Exponential; meant for desk-scale models in tests.

use crate::error::Result;
use crate::estimation::{action_distribution_estimate, image_estimate, reputation};
use crate::model::{
    counterpart, global_transition, ActionKind, AgentKnowledge, EpistemicState, Hyperparameters,
    System, UpdateScope,
};

use super::perceived_impact;

/// `V(theta, horizon)`: horizon 1 is `max_a PI`, horizon `k` adds the
/// discounted expectation of `V(theta', k - 1)`.
pub fn expectimax_oracle(
    system: &System,
    knowledge: &AgentKnowledge,
    theta: &EpistemicState,
    horizon: usize,
    hyper: &Hyperparameters,
) -> Result<f64> {
    assert!(horizon >= 1, "horizon must be at least 1");
    let g = knowledge.owner;
    let s = theta.state;
    let mut best: Option<f64> = None;
    for a in system.actions() {
        if system.action_kind(a)? != ActionKind::Objective
            || system.objective().row(g, s, a).is_none()
        {
            continue;
        }
        let mut value = perceived_impact(system, g, s, &theta.ad, a);
        if horizon > 1 {
            let r_g = reputation(g, g, &theta.img);
            let used = match counterpart(system.counterparts(), a) {
                Some(sub) if knowledge.subjective.row(g, s, sub).is_some() => sub,
                _ => a,
            };
            // The successor's AD and image are built from the knowledge the
            // node holds, not the root's.
            let at_node = AgentKnowledge {
                owner: g,
                subjective: knowledge.subjective.clone(),
                ad: theta.ad.clone(),
                img: theta.img.clone(),
            };
            let mut expected = 0.0;
            for next in system.states() {
                let p = global_transition(system, knowledge, g, s, used, next, r_g)?;
                if p == 0.0 {
                    continue;
                }
                let ad = action_distribution_estimate(
                    system,
                    &at_node,
                    s,
                    next,
                    hyper.eta,
                    UpdateScope::Restricted,
                    g,
                )?
                .distribution;
                let img = image_estimate(system, &theta.img, s, &theta.ad, hyper.delta);
                let child = EpistemicState {
                    state: next,
                    ad,
                    img,
                };
                expected += p * expectimax_oracle(system, knowledge, &child, horizon - 1, hyper)?;
            }
            value += hyper.gamma * expected;
        }
        best = Some(best.map_or(value, |b: f64| b.max(value)));
    }
    Ok(best.unwrap_or(0.0))
}
