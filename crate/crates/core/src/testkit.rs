//! Random desk-scale models for property tests and oracle comparisons.

use rand::Rng;

use crate::model::{
    Action, ActionDistribution, ActionId, ActionKind, AgentId, AgentKnowledge, ImageFunction,
    ReputationCurve, StateId, System,
};

/// Upper bounds on the size of generated models.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub agents: usize,
    pub states: usize,
    pub actions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            agents: 3,
            states: 4,
            actions: 3,
        }
    }
}

/// A random well-formed system together with one agent's knowledge.
#[derive(Debug, Clone)]
pub struct RandomModel {
    pub system: System,
    pub knowledge: AgentKnowledge,
}

fn random_row<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // sparse rows half the time, so deterministic and zero-probability
    // branches get exercised
    let mut row: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    if row.iter().all(|&p| p == 0.0) {
        row[rng.gen_range(0..n)] = 1.0;
    }
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= total);
    row
}

fn random_curve<R: Rng>(rng: &mut R) -> ReputationCurve {
    let k = rng.gen_range(1..=4);
    let mut xs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ReputationCurve::new(
        xs.into_iter()
            .map(|x| (x, rng.gen_range(0.05..=1.0)))
            .collect(),
    )
}

/// Image with random off-diagonal entries in `[-1, 1]`.
pub fn random_image<R: Rng>(rng: &mut R, agents: usize) -> ImageFunction {
    let mut img = ImageFunction::neutral(agents);
    for h in 0..agents {
        for i in 0..agents {
            if h != i {
                img.set(AgentId(h), AgentId(i), rng.gen_range(-1.0..=1.0));
            }
        }
    }
    img
}

/// Action distribution with random rows.
pub fn random_distribution<R: Rng>(
    rng: &mut R,
    agents: usize,
    states: usize,
    actions: usize,
) -> ActionDistribution {
    let mut ad = ActionDistribution::uniform(agents, states, actions);
    for h in 0..agents {
        for s in 0..states {
            let row = random_row(rng, actions);
            ad.row_mut(AgentId(h), StateId(s)).copy_from_slice(&row);
        }
    }
    ad
}

/// Generates a model within `limits`. Every agent has at least one available
/// objective action in every state; some actions are subjective and mapped
/// as counterparts, with reputation curves in the owner's model.
pub fn random_model<R: Rng>(rng: &mut R, limits: Limits) -> RandomModel {
    let na = rng.gen_range(1..=limits.agents);
    let ns = rng.gen_range(1..=limits.states);
    let nx = rng.gen_range(1..=limits.actions);
    let n_sub = if nx > 1 { rng.gen_range(0..nx) } else { 0 };
    let actions: Vec<Action> = (0..nx)
        .map(|i| Action {
            name: format!("a{i}"),
            kind: if i < nx - n_sub {
                ActionKind::Objective
            } else {
                ActionKind::Subjective
            },
        })
        .collect();
    let n_obj = nx - n_sub;
    let mut system = System::new(
        (0..na).map(|i| format!("g{i}")).collect(),
        (0..ns).map(|i| format!("s{i}")).collect(),
        actions,
    );

    for (k, sub) in (n_obj..nx).enumerate() {
        if k < n_obj && rng.gen_bool(0.8) {
            system.add_counterpart(ActionId(k), ActionId(sub)).unwrap();
        }
    }

    for g in 0..na {
        for h in 0..na {
            for s in 0..ns {
                for a in 0..nx {
                    if rng.gen_bool(0.7) {
                        let v = rng.gen_range(-1.0..=1.0);
                        system
                            .set_impact(AgentId(g), AgentId(h), StateId(s), ActionId(a), v)
                            .unwrap();
                    }
                }
            }
        }
    }

    for h in 0..na {
        for s in 0..ns {
            let keep = rng.gen_range(0..n_obj);
            for a in 0..n_obj {
                if a == keep || rng.gen_bool(0.75) {
                    let row = random_row(rng, ns);
                    system
                        .set_objective_row(AgentId(h), StateId(s), ActionId(a), row)
                        .unwrap();
                }
            }
        }
    }

    let owner = AgentId(rng.gen_range(0..na));
    let mut knowledge = AgentKnowledge::neutral(owner, na, ns, nx);
    for sub in n_obj..nx {
        for h in 0..na {
            for s in 0..ns {
                if rng.gen_bool(0.6) {
                    for d in 0..ns {
                        if d == 0 || rng.gen_bool(0.5) {
                            knowledge.subjective.insert(
                                AgentId(h),
                                StateId(s),
                                ActionId(sub),
                                StateId(d),
                                random_curve(rng),
                            );
                        }
                    }
                }
            }
        }
    }
    knowledge.ad = random_distribution(rng, na, ns, nx);
    knowledge.img = random_image(rng, na);

    RandomModel { system, knowledge }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_system;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_model(&mut rng, Limits::default());
            let report = validate_system(&m.system, std::slice::from_ref(&m.knowledge));
            assert!(report.is_clean(), "{report}");
        }
    }
}
