use crate::model::{ActionId, AgentId, StateId, System};

use super::episode::{AgentSnapshot, Trace, TraceRecord};

/// Width, in steps, of the windows used by frequency and choice metrics.
pub const WINDOW: usize = 5;

/// A quantity tracked over an episode.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// `observer`'s reputation estimate of `subject`.
    Reputation { observer: AgentId, subject: AgentId },
    /// `observer`'s belief about what `h` thinks of `i`.
    Image {
        observer: AgentId,
        h: AgentId,
        i: AgentId,
    },
    /// `observer`'s predicted probability that `agent` takes `action` in `state`.
    ActionProbability {
        observer: AgentId,
        agent: AgentId,
        state: StateId,
        action: ActionId,
    },
    /// Number of times `agent` executed `action` per window.
    Frequency { agent: AgentId, action: ActionId },
    /// Mean index, within `actions`, of the highest-valued action among
    /// `actions` in `agent`'s plans, per window. Ties go to the earlier entry.
    Choice {
        agent: AgentId,
        actions: Vec<ActionId>,
    },
}

impl MetricSpec {
    /// Column name, e.g. `rep_A_B` or `ad_A_B_s1_accept`.
    pub fn name(&self, system: &System) -> String {
        let ag = |g: AgentId| system.agent_name(g);
        match self {
            MetricSpec::Reputation { observer, subject } => {
                format!("rep_{}_{}", ag(*observer), ag(*subject))
            }
            MetricSpec::Image { observer, h, i } => {
                format!("img_{}_{}_{}", ag(*observer), ag(*h), ag(*i))
            }
            MetricSpec::ActionProbability {
                observer,
                agent,
                state,
                action,
            } => format!(
                "ad_{}_{}_{}_{}",
                ag(*observer),
                ag(*agent),
                system.state_name(*state),
                system.action_name(*action)
            ),
            MetricSpec::Frequency { agent, action } => {
                format!("freq_{}_{}", ag(*agent), system.action_name(*action))
            }
            MetricSpec::Choice { agent, actions } => {
                let names: Vec<&str> = actions.iter().map(|a| system.action_name(*a)).collect();
                format!("choice_{}_{}", ag(*agent), names.join("_"))
            }
        }
    }

    /// Whether the metric is aggregated per window rather than sampled.
    pub fn is_windowed(&self) -> bool {
        matches!(
            self,
            MetricSpec::Frequency { .. } | MetricSpec::Choice { .. }
        )
    }

    /// The planning agent whose knowledge a sampled metric reads.
    pub fn observer(&self) -> Option<AgentId> {
        match self {
            MetricSpec::Reputation { observer, .. }
            | MetricSpec::Image { observer, .. }
            | MetricSpec::ActionProbability { observer, .. } => Some(*observer),
            _ => None,
        }
    }

    /// Value of a sampled metric in a knowledge snapshot set.
    pub fn sample(&self, snapshots: &[AgentSnapshot]) -> Option<f64> {
        let find = |o: AgentId| snapshots.iter().find(|k| k.owner == o);
        match self {
            MetricSpec::Reputation { observer, subject } => {
                find(*observer).map(|k| k.reputations[subject.0])
            }
            MetricSpec::Image { observer, h, i } => find(*observer).map(|k| k.img.get(*h, *i)),
            MetricSpec::ActionProbability {
                observer,
                agent,
                state,
                action,
            } => find(*observer).map(|k| k.ad.get(*agent, *state, *action)),
            MetricSpec::Frequency { .. } | MetricSpec::Choice { .. } => None,
        }
    }

    /// Per-record value for the trace file: a sample of the post-turn
    /// knowledge, the 0/1 indicator of the frequency event, or the choice
    /// index made on this turn.
    pub fn record_value(&self, record: &TraceRecord) -> Option<f64> {
        match self {
            MetricSpec::Frequency { agent, action } => {
                Some(if record.agent == *agent && record.action == *action {
                    1.0
                } else {
                    0.0
                })
            }
            MetricSpec::Choice { agent, actions } => {
                if record.agent != *agent {
                    return None;
                }
                choice_index(actions, &record.q_values).map(|i| i as f64)
            }
            _ => self.sample(&record.knowledge),
        }
    }
}

fn choice_index(actions: &[ActionId], q_values: &[(ActionId, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, a) in actions.iter().enumerate() {
        if let Some(&(_, q)) = q_values.iter().find(|(b, _)| b == a) {
            if best.is_none_or(|(_, bq)| q > bq) {
                best = Some((i, q));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// One named series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Metrics derived from a trace.
///
/// Sampled series have `horizon + 1` points: point `t` is the knowledge at
/// the start of step `t`, the last point the final knowledge. Windowed
/// series have one point per window `[5k, 5k + 5)`; a window with no
/// defined value (a choice metric with no plans) is NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub sampled: Vec<Series>,
    pub windows: Vec<(usize, usize)>,
    pub windowed: Vec<Series>,
}

impl MetricSeries {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.sampled
            .iter()
            .chain(&self.windowed)
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }
}

/// Derives every metric declared in the trace.
pub fn derive_metrics(trace: &Trace) -> MetricSeries {
    let per_step = trace.system.agent_count();
    let horizon = trace.horizon;
    let windows: Vec<(usize, usize)> = (0..horizon.div_ceil(WINDOW))
        .map(|k| (k * WINDOW, ((k + 1) * WINDOW).min(horizon)))
        .collect();

    let mut sampled = Vec::new();
    let mut windowed = Vec::new();
    for spec in &trace.metrics {
        let name = spec.name(&trace.system);
        if spec.is_windowed() {
            let values = windows
                .iter()
                .map(|&(start, end)| {
                    let recs = &trace.records[start * per_step..end * per_step];
                    window_value(spec, recs)
                })
                .collect();
            windowed.push(Series { name, values });
        } else {
            let values = (0..=horizon)
                .map(|t| {
                    let set = if t == 0 {
                        &trace.initial
                    } else {
                        &trace.records[t * per_step - 1].knowledge
                    };
                    spec.sample(set).unwrap_or(f64::NAN)
                })
                .collect();
            sampled.push(Series { name, values });
        }
    }
    MetricSeries {
        sampled,
        windows,
        windowed,
    }
}

fn window_value(spec: &MetricSpec, records: &[TraceRecord]) -> f64 {
    match spec {
        MetricSpec::Frequency { .. } => {
            let n: f64 = records.iter().filter_map(|r| spec.record_value(r)).sum();
            n / WINDOW as f64
        }
        _ => {
            let picks: Vec<f64> = records
                .iter()
                .filter_map(|r| spec.record_value(r))
                .collect();
            if picks.is_empty() {
                f64::NAN
            } else {
                picks.iter().sum::<f64>() / picks.len() as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Action, ActionKind};

    fn system() -> System {
        System::new(
            vec!["A".into(), "B".into()],
            vec!["s0".into()],
            vec![
                Action {
                    name: "offer".into(),
                    kind: ActionKind::Objective,
                },
                Action {
                    name: "wait".into(),
                    kind: ActionKind::Objective,
                },
            ],
        )
    }

    fn record(t: usize, agent: usize, action: usize, q: Vec<(ActionId, f64)>) -> TraceRecord {
        TraceRecord {
            t,
            agent: AgentId(agent),
            action: ActionId(action),
            preferred: None,
            state_before: StateId(0),
            state_after: StateId(0),
            root_value: None,
            q_values: q,
            knowledge: Vec::new(),
        }
    }

    fn trace(records: Vec<TraceRecord>, horizon: usize, metrics: Vec<MetricSpec>) -> Trace {
        Trace {
            system: system(),
            metrics,
            horizon,
            initial: Vec::new(),
            records,
        }
    }

    #[test]
    fn eight_offers_in_first_window() {
        // A offers every step, B offers on three of the five steps
        let mut recs = Vec::new();
        for t in 0..5 {
            recs.push(record(t, 0, 0, vec![]));
            recs.push(record(t, 1, if t < 3 { 0 } else { 1 }, vec![]));
        }
        let metrics = vec![
            MetricSpec::Frequency {
                agent: AgentId(0),
                action: ActionId(0),
            },
            MetricSpec::Frequency {
                agent: AgentId(1),
                action: ActionId(0),
            },
        ];
        let m = derive_metrics(&trace(recs, 5, metrics));
        let total = m.get("freq_A_offer").unwrap()[0] + m.get("freq_B_offer").unwrap()[0];
        assert_eq!(total, 8.0 / 5.0);
    }

    #[test]
    fn no_offers_gives_zero_series() {
        let recs: Vec<_> = (0..12)
            .flat_map(|t| [record(t, 0, 1, vec![]), record(t, 1, 1, vec![])])
            .collect();
        let metrics = vec![MetricSpec::Frequency {
            agent: AgentId(0),
            action: ActionId(0),
        }];
        let m = derive_metrics(&trace(recs, 12, metrics));
        assert_eq!(m.windows, vec![(0, 5), (5, 10), (10, 12)]);
        assert_eq!(m.get("freq_A_offer").unwrap(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_choice_index() {
        let q = vec![(ActionId(0), 0.5), (ActionId(1), 0.1)];
        let recs: Vec<_> = (0..10)
            .flat_map(|t| [record(t, 0, 0, q.clone()), record(t, 1, 1, vec![])])
            .collect();
        let metrics = vec![MetricSpec::Choice {
            agent: AgentId(0),
            actions: vec![ActionId(0), ActionId(1)],
        }];
        let m = derive_metrics(&trace(recs, 10, metrics));
        assert_eq!(m.get("choice_A_offer_wait").unwrap(), &[0.0, 0.0]);
    }

    #[test]
    fn choice_ties_go_to_first_listed() {
        let q = vec![(ActionId(0), 0.5), (ActionId(1), 0.5)];
        assert_eq!(choice_index(&[ActionId(1), ActionId(0)], &q), Some(0));
        assert_eq!(choice_index(&[ActionId(1)], &[]), None);
    }
}
