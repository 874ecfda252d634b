//! Declarative scenarios: the text format, bundled experiments, and CSV
//! output of runs.

mod bundled;
mod csv_out;
mod emit;
mod parse;

pub use bundled::{bundled, bundled_names, load_scenario, resolve_source};
pub use csv_out::{
    emit_series_csv, emit_trace_csv, emit_windows_csv, format_number, write_run_outputs,
};
pub use emit::to_text;
pub use parse::{parse_scenario, ScenarioError};

use crate::model::{
    validate_system, ActionKind, AgentId, AgentKnowledge, Hyperparameters, StateId, System,
    ValidationReport, Violation,
};
use crate::simulator::{overlapping, Controller, MetricSpec, ScheduleEntry};

/// How one agent is driven, and what it knows if it plans.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSetup {
    pub controller: Controller,
    /// Present exactly for planning agents.
    pub knowledge: Option<AgentKnowledge>,
}

/// A complete experimental setup.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub system: System,
    pub start: StateId,
    /// One entry per agent, in agent order.
    pub agents: Vec<AgentSetup>,
    pub hyper: Hyperparameters,
    pub metrics: Vec<MetricSpec>,
}

impl Scenario {
    /// Planning agents, in agent order.
    pub fn planners(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.agents
            .iter()
            .enumerate()
            .filter(|(_, a)| a.controller.is_repnet())
            .map(|(i, _)| AgentId(i))
    }

    pub fn knowledge_of(&self, g: AgentId) -> Option<&AgentKnowledge> {
        self.agents.get(g.0)?.knowledge.as_ref()
    }

    /// Model invariants plus scenario-level consistency: controllers match
    /// knowledge, schedules are well formed and use objective actions,
    /// metrics refer to planning observers, hyperparameters are in range.
    pub fn validate(&self) -> ValidationReport {
        let knowledge: Vec<AgentKnowledge> = self
            .agents
            .iter()
            .filter_map(|a| a.knowledge.clone())
            .collect();
        let mut report = validate_system(&self.system, &knowledge);
        let mut push = |msg: String| report.violations.push(Violation::Scenario(msg));
        let sys = &self.system;

        if self.agents.len() != sys.agent_count() {
            push(format!(
                "{} agent setups for {} agents",
                self.agents.len(),
                sys.agent_count()
            ));
        }
        if self.start.0 >= sys.state_count() {
            push(format!("start state {} out of range", self.start));
        }
        for (i, setup) in self.agents.iter().enumerate() {
            let name = if i < sys.agent_count() {
                sys.agent_name(AgentId(i))
            } else {
                "?"
            };
            match (&setup.controller, &setup.knowledge) {
                (Controller::RepNet { mask }, Some(k)) => {
                    if k.owner != AgentId(i) {
                        push(format!("knowledge of agent {name} is owned by {}", k.owner));
                    }
                    check_entries(sys, name, "mask", mask, &mut push);
                }
                (Controller::RepNet { .. }, None) => {
                    push(format!("planning agent {name} has no knowledge"))
                }
                (Controller::Scripted(schedule), None) => {
                    check_entries(sys, name, "schedule", &schedule.entries, &mut push);
                    if !is_objective(sys, schedule.default) {
                        push(format!(
                            "schedule of {name}: default action must be an objective action"
                        ));
                    }
                }
                (Controller::Scripted(_), Some(_)) => {
                    push(format!("scripted agent {name} must not carry knowledge"))
                }
            }
        }
        for m in &self.metrics {
            if let Some(o) = m.observer() {
                if self.agents.get(o.0).is_none_or(|a| a.knowledge.is_none()) {
                    push(format!("metric observer {o} is not a planning agent"));
                }
            }
            if let MetricSpec::Choice { actions, .. } = m {
                if actions.is_empty() {
                    push("choice metric lists no actions".to_string());
                }
            }
        }
        for p in self.hyper.problems() {
            push(p);
        }
        report
    }
}

fn is_objective(sys: &System, a: crate::model::ActionId) -> bool {
    matches!(sys.action_kind(a), Ok(ActionKind::Objective))
}

fn check_entries(
    sys: &System,
    agent: &str,
    what: &str,
    entries: &[ScheduleEntry],
    push: &mut impl FnMut(String),
) {
    for e in entries {
        if e.start >= e.end {
            push(format!(
                "{what} of {agent}: empty interval {}..{}",
                e.start, e.end
            ));
        }
        if !is_objective(sys, e.action) {
            push(format!(
                "{what} of {agent}: {} is not an objective action",
                e.action
            ));
        }
    }
    for (i, j) in overlapping(entries) {
        push(format!(
            "{what} of {agent}: entries {} and {} overlap for the same state",
            i + 1,
            j + 1
        ));
    }
}

/// One-line summary of a scenario.
pub fn describe(scenario: &Scenario) -> String {
    let sys = &scenario.system;
    let planners: Vec<&str> = scenario.planners().map(|g| sys.agent_name(g)).collect();
    format!(
        "{}: {} agents ({} planning: {}), {} states, {} actions, start {}",
        scenario.name,
        sys.agent_count(),
        planners.len(),
        planners.join(", "),
        sys.state_count(),
        sys.action_count(),
        sys.state_name(scenario.start)
    )
}
