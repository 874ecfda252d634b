use crate::model::{ActionId, StateId};

/// One scheduled behaviour: in `[start, end)`, when the state matches
/// (`None` matches any state), take `action`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub start: usize,
    pub end: usize,
    pub state: Option<StateId>,
    pub action: ActionId,
}

impl ScheduleEntry {
    pub fn matches(&self, s: StateId, t: usize) -> bool {
        (self.start..self.end).contains(&t) && self.state.is_none_or(|x| x == s)
    }
}

/// Fixed behaviour of a scripted agent as a function of state and time.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
    pub default: ActionId,
}

impl Schedule {
    pub fn constant(action: ActionId) -> Self {
        Self {
            entries: Vec::new(),
            default: action,
        }
    }

    /// Pairs of entries with the same state predicate whose intervals overlap.
    pub fn overlaps(&self) -> Vec<(usize, usize)> {
        overlapping(&self.entries)
    }
}

pub(crate) fn overlapping(entries: &[ScheduleEntry]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for (j, b) in entries.iter().enumerate().skip(i + 1) {
            if a.state == b.state && a.start < b.end && b.start < a.end {
                out.push((i, j));
            }
        }
    }
    out
}

/// First matching entry wins; otherwise the default action.
pub fn scripted_policy(schedule: &Schedule, s: StateId, t: usize) -> ActionId {
    schedule
        .entries
        .iter()
        .find(|e| e.matches(s, t))
        .map_or(schedule.default, |e| e.action)
}

/// Who decides an agent's actions.
#[derive(Debug, Clone, PartialEq)]
pub enum Controller {
    /// Plans with its own knowledge. Matching `mask` entries force the
    /// executed action; the planner still runs and its choice is recorded.
    RepNet {
        mask: Vec<ScheduleEntry>,
    },
    Scripted(Schedule),
}

impl Controller {
    pub fn is_repnet(&self) -> bool {
        matches!(self, Controller::RepNet { .. })
    }
}

pub(crate) fn forced_action(mask: &[ScheduleEntry], s: StateId, t: usize) -> Option<ActionId> {
    mask.iter().find(|e| e.matches(s, t)).map(|e| e.action)
}
