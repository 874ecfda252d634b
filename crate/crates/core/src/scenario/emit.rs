use std::fmt::Write;

use crate::model::{AgentId, StateId};
use crate::simulator::{Controller, MetricSpec, ScheduleEntry};

use super::parse::HEADER;
use super::Scenario;

/// Serializes a scenario in the text format, writing every table entry
/// explicitly. Numbers use the shortest representation that parses back to
/// the same value, so `parse_scenario(&to_text(s))` reproduces `s`.
pub fn to_text(sc: &Scenario) -> String {
    let sys = &sc.system;
    let mut out = String::new();
    let w = &mut out;
    let ag = |g: AgentId| sys.agent_name(g);
    let st = |s: StateId| sys.state_name(s);

    writeln!(w, "{HEADER}").unwrap();
    if !sc.name.is_empty() {
        writeln!(w, "name {}", sc.name).unwrap();
    }
    if !sc.description.is_empty() {
        writeln!(w, "description {}", sc.description).unwrap();
    }

    writeln!(w, "\n[agents]").unwrap();
    for (g, setup) in sys.agents().zip(&sc.agents) {
        let kind = if setup.controller.is_repnet() {
            "repnet"
        } else {
            "scripted"
        };
        writeln!(w, "{} {kind}", ag(g)).unwrap();
    }

    writeln!(w, "\n[states]").unwrap();
    for s in sys.states() {
        if s == sc.start {
            writeln!(w, "{} start", st(s)).unwrap();
        } else {
            writeln!(w, "{}", st(s)).unwrap();
        }
    }

    writeln!(w, "\n[actions]").unwrap();
    for a in sys.actions() {
        let action = sys.action(a);
        writeln!(w, "{} {}", action.name, action.kind.as_str()).unwrap();
    }

    if !sys.counterparts().is_empty() {
        writeln!(w, "\n[counterparts]").unwrap();
        for (o, s) in sys.counterparts().iter() {
            writeln!(w, "{} -> {}", sys.action_name(o), sys.action_name(s)).unwrap();
        }
    }

    let impacts: Vec<_> = sys.impacts().nonzero().collect();
    if !impacts.is_empty() {
        writeln!(w, "\n[impacts]").unwrap();
        for (target, actor, s, a, v) in impacts {
            writeln!(
                w,
                "{} {} {} {} {v}",
                ag(target),
                ag(actor),
                st(s),
                sys.action_name(a)
            )
            .unwrap();
        }
    }

    if !sys.objective().is_empty() {
        writeln!(w, "\n[transitions]").unwrap();
        for ((g, s, a), row) in sys.objective().iter() {
            write!(w, "{} {} {} :", ag(g), st(s), sys.action_name(a)).unwrap();
            let mut any = false;
            for (d, &p) in row.iter().enumerate() {
                if p != 0.0 {
                    write!(w, " {}={p}", st(StateId(d))).unwrap();
                    any = true;
                }
            }
            if !any {
                write!(w, " {}=0", st(s)).unwrap();
            }
            writeln!(w).unwrap();
        }
    }

    for (g, setup) in sys.agents().zip(&sc.agents) {
        match (&setup.controller, &setup.knowledge) {
            (Controller::RepNet { mask }, Some(k)) => {
                if !k.subjective.is_empty() {
                    writeln!(w, "\n[subjective {}]", ag(g)).unwrap();
                    for ((actor, s, a), dests) in k.subjective.iter() {
                        for (d, curve) in dests {
                            write!(
                                w,
                                "{} {} {} {} :",
                                ag(actor),
                                st(s),
                                sys.action_name(a),
                                st(*d)
                            )
                            .unwrap();
                            for (r, p) in curve.points() {
                                write!(w, " {r}={p}").unwrap();
                            }
                            writeln!(w).unwrap();
                        }
                    }
                }
                let mut initial = String::new();
                let n = sys.agent_count();
                for h in 0..n {
                    for i in 0..n {
                        let v = k.img.get(AgentId(h), AgentId(i));
                        if (h != i && v != 0.0) || (h == i && v != 1.0) {
                            writeln!(initial, "image {} {} {v}", ag(AgentId(h)), ag(AgentId(i)))
                                .unwrap();
                        }
                    }
                }
                let uniform = 1.0 / sys.action_count() as f64;
                for (h, s, row) in k.ad.rows() {
                    if row.iter().any(|&p| p != uniform) {
                        write!(initial, "ad {} {}", ag(h), st(s)).unwrap();
                        for (a, &p) in row.iter().enumerate() {
                            if p != 0.0 {
                                write!(
                                    initial,
                                    " {}={p}",
                                    sys.action_name(crate::model::ActionId(a))
                                )
                                .unwrap();
                            }
                        }
                        writeln!(initial).unwrap();
                    }
                }
                if !initial.is_empty() {
                    writeln!(w, "\n[initial {}]", ag(g)).unwrap();
                    w.push_str(&initial);
                }
                if !mask.is_empty() {
                    writeln!(w, "\n[mask {}]", ag(g)).unwrap();
                    write_entries(w, sc, mask);
                }
            }
            (Controller::Scripted(schedule), _) => {
                writeln!(w, "\n[schedule {}]", ag(g)).unwrap();
                write_entries(w, sc, &schedule.entries);
                writeln!(w, "default {}", sys.action_name(schedule.default)).unwrap();
            }
            // unrepresentable; validation reports it
            (Controller::RepNet { .. }, None) => {}
        }
    }

    let h = &sc.hyper;
    writeln!(w, "\n[hyper]").unwrap();
    writeln!(w, "depth {}", h.depth).unwrap();
    writeln!(w, "gamma {}", h.gamma).unwrap();
    writeln!(w, "eta {}", h.eta).unwrap();
    writeln!(w, "delta {}", h.delta).unwrap();
    writeln!(w, "horizon {}", h.horizon).unwrap();
    writeln!(w, "seed {}", h.seed).unwrap();
    writeln!(w, "scope {}", h.scope.as_str()).unwrap();

    if !sc.metrics.is_empty() {
        writeln!(w, "\n[metrics]").unwrap();
        for m in &sc.metrics {
            match m {
                MetricSpec::Reputation { observer, subject } => {
                    writeln!(w, "reputation {} {}", ag(*observer), ag(*subject))
                }
                MetricSpec::Image { observer, h, i } => {
                    writeln!(w, "image {} {} {}", ag(*observer), ag(*h), ag(*i))
                }
                MetricSpec::ActionProbability {
                    observer,
                    agent,
                    state,
                    action,
                } => writeln!(
                    w,
                    "ad {} {} {} {}",
                    ag(*observer),
                    ag(*agent),
                    st(*state),
                    sys.action_name(*action)
                ),
                MetricSpec::Frequency { agent, action } => {
                    writeln!(w, "frequency {} {}", ag(*agent), sys.action_name(*action))
                }
                MetricSpec::Choice { agent, actions } => {
                    let names: Vec<&str> = actions.iter().map(|a| sys.action_name(*a)).collect();
                    writeln!(w, "choice {} {}", ag(*agent), names.join(" "))
                }
            }
            .unwrap();
        }
    }
    out
}

fn write_entries(w: &mut String, sc: &Scenario, entries: &[ScheduleEntry]) {
    let sys = &sc.system;
    for e in entries {
        let state = e.state.map_or("*", |s| sys.state_name(s));
        writeln!(
            w,
            "{}..{} {state} {}",
            e.start,
            e.end,
            sys.action_name(e.action)
        )
        .unwrap();
    }
}
