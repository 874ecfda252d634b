#![allow(dead_code)]

pub mod invariants;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repnet::model::{AgentId, AgentKnowledge, Hyperparameters, StateId, UpdateScope};
use repnet::scenario::{AgentSetup, Scenario};
use repnet::simulator::Controller;
use repnet::testkit::{random_model, Limits, RandomModel};

pub fn model(seed: u64) -> RandomModel {
    random_model(&mut ChaCha8Rng::seed_from_u64(seed), Limits::default())
}

pub fn hyper(depth: usize, gamma: f64) -> Hyperparameters {
    Hyperparameters {
        depth,
        gamma,
        eta: 0.1,
        delta: 0.5,
        horizon: 1,
        seed: 0,
        scope: UpdateScope::Restricted,
    }
}

/// Every agent plans; the generated owner keeps its random knowledge, the
/// others start neutral.
pub fn all_planning_scenario(m: &RandomModel, start: StateId, hyper: Hyperparameters) -> Scenario {
    let sys = &m.system;
    let agents = sys
        .agents()
        .map(|g| AgentSetup {
            controller: Controller::RepNet { mask: Vec::new() },
            knowledge: Some(if g == m.knowledge.owner {
                m.knowledge.clone()
            } else {
                AgentKnowledge::neutral(g, sys.agent_count(), sys.state_count(), sys.action_count())
            }),
        })
        .collect();
    Scenario {
        name: "random".into(),
        description: String::new(),
        system: sys.clone(),
        start,
        agents,
        hyper,
        metrics: Vec::new(),
    }
}

pub fn agent(i: usize) -> AgentId {
    AgentId(i)
}
