//! Report-based model validation: every violated invariant is collected with
//! its location instead of stopping at the first one.

use std::collections::BTreeSet;
use std::fmt;

use super::ids::{ActionId, ActionKind, AgentId, StateId};
use super::knowledge::AgentKnowledge;
use super::system::System;

const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ObjectiveRowSum {
        agent: AgentId,
        state: StateId,
        action: ActionId,
        sum: f64,
    },
    ObjectiveEntry {
        agent: AgentId,
        state: StateId,
        action: ActionId,
        dest: StateId,
        value: f64,
    },
    ImpactRange {
        target: AgentId,
        actor: AgentId,
        state: StateId,
        action: ActionId,
        value: f64,
    },
    CounterpartKind {
        objective: ActionId,
        subjective: ActionId,
    },
    CounterpartNotInjective {
        subjective: ActionId,
    },
    KnowledgeOwner {
        owner: AgentId,
    },
    KnowledgeShape {
        owner: AgentId,
        what: &'static str,
    },
    SubjectiveKind {
        owner: AgentId,
        action: ActionId,
    },
    SubjectiveIndex {
        owner: AgentId,
        actor: AgentId,
        state: StateId,
        dest: StateId,
    },
    CurveEmpty {
        owner: AgentId,
        actor: AgentId,
        state: StateId,
        action: ActionId,
        dest: StateId,
    },
    CurveBreakpoints {
        owner: AgentId,
        actor: AgentId,
        state: StateId,
        action: ActionId,
        dest: StateId,
    },
    CurveProbability {
        owner: AgentId,
        actor: AgentId,
        state: StateId,
        action: ActionId,
        dest: StateId,
        value: f64,
    },
    SubjectiveZeroMass {
        owner: AgentId,
        actor: AgentId,
        state: StateId,
        action: ActionId,
        reputation: f64,
    },
    ActionRowSum {
        owner: AgentId,
        agent: AgentId,
        state: StateId,
        sum: f64,
    },
    ActionRowEntry {
        owner: AgentId,
        agent: AgentId,
        state: StateId,
        action: ActionId,
        value: f64,
    },
    ImageRange {
        owner: AgentId,
        h: AgentId,
        i: AgentId,
        value: f64,
    },
    ImageDiagonal {
        owner: AgentId,
        agent: AgentId,
        value: f64,
    },
    /// A problem outside the model proper: controllers, schedules, metrics
    /// or hyperparameters.
    Scenario(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            ObjectiveRowSum { agent, state, action, sum } => write!(
                f,
                "objective row ({agent}, {state}, {action}) sums to {sum}, expected 1"
            ),
            ObjectiveEntry { agent, state, action, dest, value } => write!(
                f,
                "objective row ({agent}, {state}, {action}) has entry {value} for {dest} outside [0, 1]"
            ),
            ImpactRange { target, actor, state, action, value } => write!(
                f,
                "impact ({target}, {actor}, {state}, {action}) = {value} outside [-1, 1]"
            ),
            CounterpartKind { objective, subjective } => write!(
                f,
                "counterpart {objective} -> {subjective} must map an objective to a subjective action"
            ),
            CounterpartNotInjective { subjective } => {
                write!(f, "subjective action {subjective} is the counterpart of more than one action")
            }
            KnowledgeOwner { owner } => write!(f, "knowledge owner {owner} is not an agent"),
            KnowledgeShape { owner, what } => {
                write!(f, "knowledge of {owner}: {what} dimensions do not match the system")
            }
            SubjectiveKind { owner, action } => write!(
                f,
                "subjective model of {owner} uses {action}, which is not a subjective action"
            ),
            SubjectiveIndex { owner, actor, state, dest } => write!(
                f,
                "subjective model of {owner} references out-of-range ids ({actor}, {state}, {dest})"
            ),
            CurveEmpty { owner, actor, state, action, dest } => write!(
                f,
                "subjective curve of {owner} for ({actor}, {state}, {action}, {dest}) has no breakpoints"
            ),
            CurveBreakpoints { owner, actor, state, action, dest } => write!(
                f,
                "subjective curve of {owner} for ({actor}, {state}, {action}, {dest}) needs strictly increasing breakpoints in [-1, 1]"
            ),
            CurveProbability { owner, actor, state, action, dest, value } => write!(
                f,
                "subjective curve of {owner} for ({actor}, {state}, {action}, {dest}) has probability {value} outside [0, 1]"
            ),
            SubjectiveZeroMass { owner, actor, state, action, reputation } => write!(
                f,
                "subjective row of {owner} for ({actor}, {state}, {action}) has zero mass at reputation {reputation}"
            ),
            ActionRowSum { owner, agent, state, sum } => write!(
                f,
                "action distribution of {owner} for ({agent}, {state}) sums to {sum}, expected 1"
            ),
            ActionRowEntry { owner, agent, state, action, value } => write!(
                f,
                "action distribution of {owner} for ({agent}, {state}) has {value} for {action} outside [0, 1]"
            ),
            ImageRange { owner, h, i, value } => {
                write!(f, "image of {owner} for ({h}, {i}) = {value} outside [-1, 1]")
            }
            ImageDiagonal { owner, agent, value } => {
                write!(f, "image of {owner} for ({agent}, {agent}) = {value}, expected 1")
            }
            Scenario(message) => f.write_str(message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Like the `Display` output, but with agents, states and actions named
    /// as in `system` wherever the id is in range.
    pub fn render(&self, system: &System) -> String {
        let text = self.to_string();
        let mut out = String::with_capacity(text.len());
        let mut rest = text.as_str();
        while let Some(pos) = rest.find('#') {
            let (head, tail) = rest.split_at(pos);
            let digits = tail[1..].bytes().take_while(u8::is_ascii_digit).count();
            let kind = ["agent", "state", "action"]
                .into_iter()
                .find(|k| head.ends_with(k) && digits > 0);
            let name = kind.and_then(|k| {
                let i: usize = tail[1..=digits].parse().ok()?;
                match k {
                    "agent" if i < system.agent_count() => Some(system.agent_name(AgentId(i))),
                    "state" if i < system.state_count() => Some(system.state_name(StateId(i))),
                    "action" if i < system.action_count() => Some(system.action_name(ActionId(i))),
                    _ => None,
                }
            });
            match (kind, name) {
                (Some(k), Some(name)) => {
                    out.push_str(&head[..head.len() - k.len()]);
                    out.push_str(k);
                    out.push(' ');
                    out.push_str(name);
                    rest = &tail[1 + digits..];
                }
                _ => {
                    out.push_str(head);
                    out.push('#');
                    rest = &tail[1..];
                }
            }
        }
        out.push_str(rest);
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn in_signed_unit(x: f64) -> bool {
    (-1.0..=1.0).contains(&x)
}

/// Checks the system and every agent's knowledge against the model invariants.
pub fn validate_system(system: &System, knowledge: &[AgentKnowledge]) -> ValidationReport {
    let mut out = Vec::new();

    for ((agent, state, action), row) in system.objective().iter() {
        for (d, &p) in row.iter().enumerate() {
            if !in_unit(p) {
                out.push(Violation::ObjectiveEntry {
                    agent,
                    state,
                    action,
                    dest: StateId(d),
                    value: p,
                });
            }
        }
        let sum: f64 = row.iter().sum();
        if sum.is_nan() || (sum - 1.0).abs() > ROW_TOLERANCE {
            out.push(Violation::ObjectiveRowSum {
                agent,
                state,
                action,
                sum,
            });
        }
    }

    for (target, actor, state, action, value) in system.impacts().nonzero() {
        if !in_signed_unit(value) {
            out.push(Violation::ImpactRange {
                target,
                actor,
                state,
                action,
                value,
            });
        }
    }

    let mut images = BTreeSet::new();
    for (o, s) in system.counterparts().iter() {
        let ok = system.action_kind(o) == Ok(ActionKind::Objective)
            && system.action_kind(s) == Ok(ActionKind::Subjective);
        if !ok {
            out.push(Violation::CounterpartKind {
                objective: o,
                subjective: s,
            });
        }
        if !images.insert(s) {
            out.push(Violation::CounterpartNotInjective { subjective: s });
        }
    }

    for k in knowledge {
        validate_knowledge(system, k, &mut out);
    }

    ValidationReport { violations: out }
}

fn validate_knowledge(system: &System, k: &AgentKnowledge, out: &mut Vec<Violation>) {
    let owner = k.owner;
    if system.check_agent(owner).is_err() {
        out.push(Violation::KnowledgeOwner { owner });
    }
    let (na, ns, nx) = (
        system.agent_count(),
        system.state_count(),
        system.action_count(),
    );

    for ((actor, state, action), curves) in k.subjective.iter() {
        if system.action_kind(action) != Ok(ActionKind::Subjective) {
            out.push(Violation::SubjectiveKind { owner, action });
        }
        for &dest in curves.keys() {
            if actor.0 >= na || state.0 >= ns || dest.0 >= ns {
                out.push(Violation::SubjectiveIndex {
                    owner,
                    actor,
                    state,
                    dest,
                });
            }
        }
        let mut knots = Vec::new();
        for (&dest, curve) in curves {
            let pts = curve.points();
            if pts.is_empty() {
                out.push(Violation::CurveEmpty {
                    owner,
                    actor,
                    state,
                    action,
                    dest,
                });
                continue;
            }
            let increasing = pts.windows(2).all(|w| w[0].0 < w[1].0);
            if !increasing || !pts.iter().all(|&(r, _)| in_signed_unit(r)) {
                out.push(Violation::CurveBreakpoints {
                    owner,
                    actor,
                    state,
                    action,
                    dest,
                });
            }
            for &(_, p) in pts {
                if !in_unit(p) {
                    out.push(Violation::CurveProbability {
                        owner,
                        actor,
                        state,
                        action,
                        dest,
                        value: p,
                    });
                }
            }
            knots.extend(pts.iter().map(|&(r, _)| r));
        }
        // The row total is piecewise linear and non-negative, so its minimum
        // over [-1, 1] sits on a breakpoint or an end of the range.
        knots.extend([-1.0, 1.0]);
        for r in knots {
            let total: f64 = curves.values().map(|c| c.value_at(r)).sum();
            if total.is_nan() || total <= 0.0 {
                out.push(Violation::SubjectiveZeroMass {
                    owner,
                    actor,
                    state,
                    action,
                    reputation: r,
                });
                break;
            }
        }
    }

    if k.ad.dims() != (na, ns, nx) {
        out.push(Violation::KnowledgeShape {
            owner,
            what: "action distribution",
        });
    } else {
        for (agent, state, row) in k.ad.rows() {
            for (a, &p) in row.iter().enumerate() {
                if !in_unit(p) {
                    out.push(Violation::ActionRowEntry {
                        owner,
                        agent,
                        state,
                        action: ActionId(a),
                        value: p,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if sum.is_nan() || (sum - 1.0).abs() > ROW_TOLERANCE {
                out.push(Violation::ActionRowSum {
                    owner,
                    agent,
                    state,
                    sum,
                });
            }
        }
    }

    if k.img.agent_count() != na {
        out.push(Violation::KnowledgeShape {
            owner,
            what: "image function",
        });
    } else {
        for h in system.agents() {
            for i in system.agents() {
                let v = k.img.get(h, i);
                if h == i {
                    if v != 1.0 {
                        out.push(Violation::ImageDiagonal {
                            owner,
                            agent: h,
                            value: v,
                        });
                    }
                } else if !in_signed_unit(v) {
                    out.push(Violation::ImageRange {
                        owner,
                        h,
                        i,
                        value: v,
                    });
                }
            }
        }
    }
}
