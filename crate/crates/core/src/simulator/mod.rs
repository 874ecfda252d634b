//! Turn-based episodes: planning and scripted agents act in round-robin
//! order, every planning agent learns from each observed transition, and the
//! run is recorded for metric derivation.

mod episode;
mod metrics;
mod schedule;

pub use episode::{
    observe_and_learn, run_episode, step_environment, AgentSnapshot, Trace, TraceRecord,
};
pub use metrics::{derive_metrics, MetricSeries, MetricSpec, Series, WINDOW};
pub(crate) use schedule::overlapping;
pub use schedule::{scripted_policy, Controller, Schedule, ScheduleEntry};
