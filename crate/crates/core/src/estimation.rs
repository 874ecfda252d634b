//! The learning half of the loop: expected total impact, image estimation,
//! reputation, and action-distribution estimation with Laplace smoothing.
//!
//! Every function here is pure; inputs are never modified.

use crate::error::Result;
use crate::model::{
    likelihood_row, ActionDistribution, AgentId, AgentKnowledge, ImageFunction, StateId,
    SubjectiveTransitionSpec, System, UpdateScope,
};

/// Expected total impact between `h` and `i` in state `s`, according to the
/// observer whose action distribution is `ad`:
///
/// `sum_a [ delta * AD(i,s)(a) * I(h,i,s,a) + (1 - delta) * AD(h,s)(a) * I(i,h,s,a) ]`
pub fn expected_total_impact(
    system: &System,
    h: AgentId,
    i: AgentId,
    s: StateId,
    ad: &ActionDistribution,
    delta: f64,
) -> f64 {
    let from_i = ad.row(i, s);
    let from_h = ad.row(h, s);
    system
        .actions()
        .map(|a| {
            delta * from_i[a.0] * system.impact(h, i, s, a)
                + (1.0 - delta) * from_h[a.0] * system.impact(i, h, s, a)
        })
        .sum()
}

/// Saturating image update: moves `v` towards `+1` by a fraction `impact` of
/// the remaining headroom when `impact >= 0`, towards `-1` otherwise.
pub fn image_update(v: f64, impact: f64) -> f64 {
    if impact >= 0.0 {
        v + (1.0 - v) * impact
    } else {
        v + (1.0 + v) * impact
    }
}

/// Updates every off-diagonal image entry with the expected total impact of
/// the pair in `s`. The diagonal stays pinned at 1.
pub fn image_estimate(
    system: &System,
    img: &ImageFunction,
    s: StateId,
    ad: &ActionDistribution,
    delta: f64,
) -> ImageFunction {
    let rule = system.update_rule();
    let mut next = img.clone();
    for h in system.agents() {
        for i in system.agents() {
            if h == i {
                continue;
            }
            let eti = expected_total_impact(system, h, i, s, ad, delta);
            next.set(h, i, rule.apply(img.get(h, i), eti));
        }
    }
    next.pin_diagonal();
    next
}

/// Reputation of `h` according to `g`: the images others hold of `h`, each
/// weighted by `g`'s image of the opinion holder, averaged. Self-reputation
/// leaves `g` out of the average; with nobody left it is 0.
pub fn reputation(g: AgentId, h: AgentId, img: &ImageFunction) -> f64 {
    let n = img.agent_count();
    let holders = (0..n).map(AgentId).filter(|&i| h != g || i != g);
    let (sum, count) = holders.fold((0.0, 0usize), |(sum, count), i| {
        (sum + img.get(h, i) * img.get(i, g), count + 1)
    });
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Result of one action-distribution estimation step.
#[derive(Debug, Clone, PartialEq)]
pub struct AdeUpdate {
    pub distribution: ActionDistribution,
    /// Rows whose normalizer was zero (only possible with `eta = 0`); they
    /// were copied unchanged.
    pub degenerate_rows: Vec<(AgentId, StateId)>,
}

/// Bayesian update of the observer's action distribution after seeing the
/// environment move from `prev` to `next`, with Laplace smoothing `eta`.
///
/// With [`UpdateScope::Restricted`] only the row `(acting, prev)` changes;
/// with [`UpdateScope::Literal`] every `(agent, state)` row is conditioned on
/// `next` and `acting` is ignored.
pub fn action_distribution_estimate(
    system: &System,
    knowledge: &AgentKnowledge,
    prev: StateId,
    next: StateId,
    eta: f64,
    scope: UpdateScope,
    acting: AgentId,
) -> Result<AdeUpdate> {
    estimate_parts(
        system,
        &knowledge.subjective,
        knowledge.owner,
        &knowledge.ad,
        &knowledge.img,
        prev,
        next,
        eta,
        scope,
        acting,
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn estimate_parts(
    system: &System,
    subjective: &SubjectiveTransitionSpec,
    owner: AgentId,
    ad: &ActionDistribution,
    img: &ImageFunction,
    prev: StateId,
    next: StateId,
    eta: f64,
    scope: UpdateScope,
    acting: AgentId,
) -> Result<AdeUpdate> {
    let mut out = ad.clone();
    let mut degenerate_rows = Vec::new();
    let targets: Vec<(AgentId, StateId)> = match scope {
        UpdateScope::Restricted => vec![(acting, prev)],
        UpdateScope::Literal => system
            .agents()
            .flat_map(|h| system.states().map(move |s| (h, s)))
            .collect(),
    };
    for (h, s) in targets {
        let r = reputation(owner, h, img);
        let prior = ad.row(h, s);
        let mut weights = Vec::with_capacity(prior.len());
        for a in system.actions() {
            let lik =
                likelihood_row(system, subjective, h, s, a, r)?.map_or(0.0, |row| row[next.0]);
            weights.push(lik * prior[a.0] + eta);
        }
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            for (dst, w) in out.row_mut(h, s).iter_mut().zip(&weights) {
                *dst = w / total;
            }
        } else {
            degenerate_rows.push((h, s));
        }
    }
    Ok(AdeUpdate {
        distribution: out,
        degenerate_rows,
    })
}
