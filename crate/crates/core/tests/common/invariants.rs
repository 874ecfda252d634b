//! The invariant suite, one function per property. Each runs its property
//! over randomly generated inputs and reports the first failure.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use repnet::estimation::{action_distribution_estimate, image_estimate, image_update, reputation};
use repnet::model::{
    global_row, global_transition, subjective_probability, ActionId, ActionKind, AgentId, StateId,
    SubjectiveTransitionSpec, UpdateScope,
};
use repnet::planner::{expectimax_oracle, plan};
use repnet::simulator::run_episode;
use repnet::testkit::random_image;

use super::{all_planning_scenario, hyper, model};

pub type Outcome = Result<(), String>;

fn run<S: Strategy>(
    config: &Config,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let config = Config {
        failure_persistence: None,
        ..config.clone()
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub type Check = fn(&Config) -> Outcome;

/// Every property, by name.
pub const ALL: &[(&str, Check)] = &[
    (
        "transition_rows_are_distributions",
        transition_rows_are_distributions,
    ),
    (
        "objective_transitions_ignore_reputation",
        objective_transitions_ignore_reputation,
    ),
    (
        "subjective_probability_is_continuous",
        subjective_probability_is_continuous,
    ),
    (
        "image_update_is_monotone_and_bounded",
        image_update_is_monotone_and_bounded,
    ),
    ("reputation_is_bounded", reputation_is_bounded),
    (
        "image_estimate_pins_diagonal_and_stays_bounded",
        image_estimate_pins_diagonal_and_stays_bounded,
    ),
    ("estimation_is_pure", estimation_is_pure),
    (
        "smoothed_estimate_rows_are_positive_distributions",
        smoothed_estimate_rows_are_positive_distributions,
    ),
    (
        "unsmoothed_estimate_matches_bayes_rule",
        unsmoothed_estimate_matches_bayes_rule,
    ),
    ("root_value_is_bounded", root_value_is_bounded),
    ("planner_matches_oracle", planner_matches_oracle),
    ("planning_is_deterministic", planning_is_deterministic),
    (
        "root_self_impact_shift_keeps_argmax",
        root_self_impact_shift_keeps_argmax,
    ),
    (
        "value_grows_with_discount_for_nonnegative_impacts",
        value_grows_with_discount_for_nonnegative_impacts,
    ),
    (
        "episodes_conserve_probability",
        episodes_conserve_probability,
    ),
];

pub fn transition_rows_are_distributions(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), prop::collection::vec(-1.0f64..=1.0, 100)),
        |(seed, rs)| {
            let m = model(seed);
            let sys = &m.system;
            for h in sys.agents() {
                for s in sys.states() {
                    for a in sys.actions() {
                        for &r in &rs {
                            let Ok(row) = global_row(sys, &m.knowledge, h, s, a, r) else {
                                break;
                            };
                            let total: f64 = row.iter().sum();
                            prop_assert!((total - 1.0).abs() < 1e-9, "{h} {s} {a} at {r}: {total}");
                            prop_assert!(row.iter().all(|&p| (0.0..=1.0 + 1e-12).contains(&p)));
                        }
                    }
                }
            }
            Ok(())
        },
    )
}

pub fn objective_transitions_ignore_reputation(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), -1.0f64..=1.0, -1.0f64..=1.0),
        |(seed, r1, r2)| {
            let m = model(seed);
            let sys = &m.system;
            for ((h, s, a), _) in sys.objective().iter() {
                for d in sys.states() {
                    let p1 = global_transition(sys, &m.knowledge, h, s, a, d, r1).unwrap();
                    let p2 = global_transition(sys, &m.knowledge, h, s, a, d, r2).unwrap();
                    prop_assert_eq!(p1, p2);
                }
            }
            Ok(())
        },
    )
}

pub fn subjective_probability_is_continuous(config: &Config) -> Outcome {
    run(config, (any::<u64>(), -1.0f64..=1.0), |(seed, r)| {
        let eps = 1e-6;
        let m = model(seed);
        let spec = &m.knowledge.subjective;
        for ((h, s, a), curves) in spec.iter() {
            // p = c_d / S, so |dp| <= eps * L * (n + 1) / S_min with L the
            // steepest curve slope
            let slope = curves
                .values()
                .flat_map(|c| {
                    c.points()
                        .windows(2)
                        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
                })
                .fold(0.0, f64::max);
            let total_at = |x: f64| curves.values().map(|c| c.value_at(x)).sum::<f64>();
            let s_min = total_at(r).min(total_at(r + eps));
            let bound = eps * slope * (curves.len() as f64 + 1.0) / s_min + 1e-12;
            for &d in curves.keys() {
                let p0 = subjective_probability(spec, h, s, a, d, r).unwrap();
                let p1 = subjective_probability(spec, h, s, a, d, r + eps).unwrap();
                prop_assert!((p0 - p1).abs() <= bound, "{p0} vs {p1}, bound {bound}");
            }
        }
        Ok(())
    })
}

pub fn image_update_is_monotone_and_bounded(config: &Config) -> Outcome {
    run(config, (-1.0f64..=1.0, -1.0f64..=1.0), |(v, i)| {
        let u = image_update(v, i);
        prop_assert!((-1.0..=1.0).contains(&u));
        if i >= 0.0 {
            prop_assert!(u >= v);
        }
        if i <= 0.0 {
            prop_assert!(u <= v);
        }
        Ok(())
    })
}

pub fn reputation_is_bounded(config: &Config) -> Outcome {
    run(config, (any::<u64>(), 1usize..=5), |(seed, n)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let img = random_image(&mut rng, n);
        for g in 0..n {
            for h in 0..n {
                let r = reputation(AgentId(g), AgentId(h), &img);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }
        Ok(())
    })
}

pub fn image_estimate_pins_diagonal_and_stays_bounded(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0.0f64..=1.0, 0usize..4),
        |(seed, delta, s)| {
            let m = model(seed);
            let sys = &m.system;
            let s = StateId(s % sys.state_count());
            let img = image_estimate(sys, &m.knowledge.img, s, &m.knowledge.ad, delta);
            for h in sys.agents() {
                for i in sys.agents() {
                    let v = img.get(h, i);
                    if h == i {
                        prop_assert_eq!(v, 1.0);
                    } else {
                        prop_assert!((-1.0..=1.0).contains(&v));
                    }
                }
            }
            Ok(())
        },
    )
}

pub fn estimation_is_pure(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..4, 0usize..4, 0usize..3, any::<bool>()),
        |(seed, prev, next, acting, literal)| {
            let m = model(seed);
            let sys = &m.system;
            let (prev, next) = (
                StateId(prev % sys.state_count()),
                StateId(next % sys.state_count()),
            );
            let acting = AgentId(acting % sys.agent_count());
            let scope = if literal {
                UpdateScope::Literal
            } else {
                UpdateScope::Restricted
            };
            let a = image_estimate(sys, &m.knowledge.img, prev, &m.knowledge.ad, 0.3);
            let b = image_estimate(sys, &m.knowledge.img, prev, &m.knowledge.ad, 0.3);
            prop_assert_eq!(a, b);
            let x = action_distribution_estimate(sys, &m.knowledge, prev, next, 0.1, scope, acting)
                .unwrap();
            let y = action_distribution_estimate(sys, &m.knowledge, prev, next, 0.1, scope, acting)
                .unwrap();
            prop_assert_eq!(x, y);
            Ok(())
        },
    )
}

pub fn smoothed_estimate_rows_are_positive_distributions(config: &Config) -> Outcome {
    run(
        config,
        (
            any::<u64>(),
            0usize..4,
            0usize..4,
            0usize..3,
            1e-6f64..=1.0,
            any::<bool>(),
        ),
        |(seed, prev, next, acting, eta, literal)| {
            let m = model(seed);
            let sys = &m.system;
            let (prev, next) = (
                StateId(prev % sys.state_count()),
                StateId(next % sys.state_count()),
            );
            let acting = AgentId(acting % sys.agent_count());
            let scope = if literal {
                UpdateScope::Literal
            } else {
                UpdateScope::Restricted
            };
            let up =
                action_distribution_estimate(sys, &m.knowledge, prev, next, eta, scope, acting)
                    .unwrap();
            prop_assert!(up.degenerate_rows.is_empty());
            for (h, s, row) in up.distribution.rows() {
                let total: f64 = row.iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                let updated = scope == UpdateScope::Literal || (h, s) == (acting, prev);
                if updated {
                    prop_assert!(row.iter().all(|&p| p > 0.0), "{h} {s}: {row:?}");
                }
            }
            Ok(())
        },
    )
}

pub fn unsmoothed_estimate_matches_bayes_rule(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..4, 0usize..4, 0usize..3),
        |(seed, prev, next, acting)| {
            let m = model(seed);
            let sys = &m.system;
            let k = &m.knowledge;
            let (prev, next) = (
                StateId(prev % sys.state_count()),
                StateId(next % sys.state_count()),
            );
            let acting = AgentId(acting % sys.agent_count());
            let up = action_distribution_estimate(
                sys,
                k,
                prev,
                next,
                0.0,
                UpdateScope::Restricted,
                acting,
            )
            .unwrap();

            let r = reputation(k.owner, acting, &k.img);
            let prior = k.ad.row(acting, prev);
            let likelihood = |a: ActionId| -> f64 {
                match sys.action(a).kind {
                    ActionKind::Objective => sys
                        .objective()
                        .row(acting, prev, a)
                        .map_or(0.0, |row| row[next.0]),
                    ActionKind::Subjective => {
                        bayes_subjective(&k.subjective, acting, prev, a, next, r)
                    }
                }
            };
            let joint: Vec<f64> = sys.actions().map(|a| likelihood(a) * prior[a.0]).collect();
            let evidence: f64 = joint.iter().sum();
            let got = up.distribution.row(acting, prev);
            if evidence > 0.0 {
                prop_assert!(up.degenerate_rows.is_empty());
                for (a, j) in joint.iter().enumerate() {
                    prop_assert!(
                        (got[a] - j / evidence).abs() <= 1e-12,
                        "{} vs {}",
                        got[a],
                        j / evidence
                    );
                }
            } else {
                prop_assert_eq!(up.degenerate_rows, vec![(acting, prev)]);
                prop_assert_eq!(got, prior);
            }
            // no other row moves
            for (h, s, row) in up.distribution.rows() {
                if (h, s) != (acting, prev) {
                    prop_assert_eq!(row, k.ad.row(h, s));
                }
            }
            Ok(())
        },
    )
}

pub fn root_value_is_bounded(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..=3, 0.0f64..0.99),
        |(seed, depth, gamma)| {
            let m = model(seed);
            let theta = m.knowledge.epistemic(StateId(0));
            let v = plan(&m.system, &m.knowledge, &theta, &hyper(depth, gamma))
                .unwrap()
                .value;
            let bound = (1.0 - gamma.powi(depth as i32 + 1)) / (1.0 - gamma);
            prop_assert!(v.abs() <= bound + 1e-12, "{v} > {bound}");
            Ok(())
        },
    )
}

pub fn planner_matches_oracle(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..=2, 0.0f64..=1.0),
        |(seed, depth, gamma)| {
            let m = model(seed);
            let theta = m.knowledge.epistemic(StateId(0));
            let h = hyper(depth, gamma);
            let v = plan(&m.system, &m.knowledge, &theta, &h).unwrap().value;
            let o = expectimax_oracle(&m.system, &m.knowledge, &theta, depth + 1, &h).unwrap();
            prop_assert!((v - o).abs() <= 1e-9, "{v} vs {o}");
            Ok(())
        },
    )
}

pub fn planning_is_deterministic(config: &Config) -> Outcome {
    run(config, (any::<u64>(), 0usize..=3), |(seed, depth)| {
        let m = model(seed);
        let theta = m.knowledge.epistemic(StateId(0));
        let h = hyper(depth, 0.7);
        let a = plan(&m.system, &m.knowledge, &theta, &h).unwrap();
        let b = plan(&m.system, &m.knowledge, &theta, &h).unwrap();
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub fn root_self_impact_shift_keeps_argmax(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..=3, -1.0f64..=1.0),
        |(seed, depth, c)| {
            let mut m = model(seed);
            let root = StateId(0);
            let ns = m.system.state_count();
            // with look-ahead, the root state must not be revisited, or the shift
            // would also reach deeper nodes with action-dependent probability
            let depth = if ns == 1 { 0 } else { depth };
            if depth > 0 {
                m.knowledge.subjective = SubjectiveTransitionSpec::new();
                let rows: Vec<_> = m
                    .system
                    .objective()
                    .iter()
                    .map(|(key, row)| (key, row.to_vec()))
                    .collect();
                for ((h, s, a), mut row) in rows {
                    row[1] += row[0];
                    row[0] = 0.0;
                    m.system.set_objective_row(h, s, a, row).unwrap();
                }
            }
            // scale impacts into [-0.5, 0.5] so the shift stays in range
            let sys = &mut m.system;
            let g = m.knowledge.owner;
            let impacts: Vec<_> = sys.impacts().nonzero().collect();
            for (t, actor, s, a, v) in impacts {
                sys.set_impact(t, actor, s, a, v / 2.0).unwrap();
            }
            let h = hyper(depth, 0.7);
            let theta = m.knowledge.epistemic(root);
            let before = plan(&m.system, &m.knowledge, &theta, &h).unwrap();
            let shift = c / 2.0;
            for a in m.system.actions() {
                let v = m.system.impact(g, g, root, a);
                m.system.set_impact(g, g, root, a, v + shift).unwrap();
            }
            let after = plan(&m.system, &m.knowledge, &theta, &h).unwrap();
            let n = m.system.agent_count() as f64;
            // a different choice is only acceptable between values tied up to
            // rounding
            if before.chosen != after.chosen {
                let gap = before.q(before.chosen).unwrap() - before.q(after.chosen).unwrap();
                prop_assert!(
                    gap.abs() < 1e-12,
                    "{:?} -> {:?}",
                    before.q_values,
                    after.q_values
                );
            }
            for ((a, q0), (b, q1)) in before.q_values.iter().zip(&after.q_values) {
                prop_assert_eq!(a, b);
                prop_assert!((q1 - q0 - shift / n).abs() < 1e-9);
            }
            Ok(())
        },
    )
}

pub fn value_grows_with_discount_for_nonnegative_impacts(config: &Config) -> Outcome {
    run(
        config,
        (any::<u64>(), 0usize..=3, 0.0f64..=1.0, 0.0f64..=1.0),
        |(seed, depth, g1, g2)| {
            let mut m = model(seed);
            let impacts: Vec<_> = m.system.impacts().nonzero().collect();
            for (t, actor, s, a, v) in impacts {
                m.system.set_impact(t, actor, s, a, v.abs()).unwrap();
            }
            let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            let theta = m.knowledge.epistemic(StateId(0));
            let v_lo = plan(&m.system, &m.knowledge, &theta, &hyper(depth, lo))
                .unwrap()
                .value;
            let v_hi = plan(&m.system, &m.knowledge, &theta, &hyper(depth, hi))
                .unwrap()
                .value;
            prop_assert!(v_hi >= v_lo - 1e-12, "{v_hi} < {v_lo}");
            Ok(())
        },
    )
}

pub fn episodes_conserve_probability(config: &Config) -> Outcome {
    run(
        config,
        (
            any::<u64>(),
            any::<u64>(),
            0usize..=6,
            0usize..4,
            any::<bool>(),
        ),
        |(seed, run_seed, horizon, start, literal)| {
            let m = model(seed);
            let mut h = hyper(1, 0.7);
            h.horizon = horizon;
            h.seed = run_seed;
            h.scope = if literal {
                UpdateScope::Literal
            } else {
                UpdateScope::Restricted
            };
            let sc = all_planning_scenario(&m, StateId(start % m.system.state_count()), h);
            let trace = run_episode(&sc, &h).unwrap();
            let n = m.system.agent_count();
            prop_assert_eq!(trace.records.len(), horizon * n);

            for rec in &trace.records {
                for snap in &rec.knowledge {
                    for (_, _, row) in snap.ad.rows() {
                        prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    }
                    prop_assert!(snap.reputations.iter().all(|r| (-1.0..=1.0).contains(r)));
                    // the row just conditioned on this turn is never exactly zero
                    let row = snap.ad.row(rec.agent, rec.state_before);
                    prop_assert!(row.iter().all(|&p| p > 0.0), "{row:?}");
                }
            }

            let again = run_episode(&sc, &h).unwrap();
            prop_assert_eq!(&trace.records, &again.records);
            Ok(())
        },
    )
}

fn bayes_subjective(
    spec: &SubjectiveTransitionSpec,
    actor: AgentId,
    s: StateId,
    a: ActionId,
    next: StateId,
    r: f64,
) -> f64 {
    let Some(curves) = spec.row(actor, s, a) else {
        return 0.0;
    };
    let total: f64 = curves.values().map(|c| c.value_at(r)).sum();
    curves.get(&next).map_or(0.0, |c| c.value_at(r) / total)
}
