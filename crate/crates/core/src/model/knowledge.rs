use std::collections::BTreeMap;

use super::ids::{ActionId, AgentId, StateId};

/// Piecewise-linear probability as a function of reputation.
///
/// Breakpoints are `(reputation, probability)` pairs sorted by reputation.
/// Outside the breakpoint range the curve is clamped to its endpoint values.
#[derive(Debug, Clone, PartialEq)]
pub struct ReputationCurve {
    points: Vec<(f64, f64)>,
}

impl ReputationCurve {
    /// Builds a curve from breakpoints as given; validation reports
    /// unsorted or out-of-range points.
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        Self { points }
    }

    pub fn constant(p: f64) -> Self {
        Self::new(vec![(0.0, p)])
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn value_at(&self, r: f64) -> f64 {
        let pts = &self.points;
        let Some(&(r0, p0)) = pts.first() else {
            return 0.0;
        };
        if r <= r0 {
            return p0;
        }
        let &(rn, pn) = pts.last().unwrap();
        if r >= rn {
            return pn;
        }
        // first breakpoint strictly above r
        let k = pts.partition_point(|&(x, _)| x <= r);
        let (xa, ya) = pts[k - 1];
        let (xb, yb) = pts[k];
        ya + (yb - ya) * (r - xa) / (xb - xa)
    }
}

/// One agent's subjective transition model: for each `(actor, state,
/// subjective action)` a reputation curve per destination state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubjectiveTransitionSpec {
    rows: BTreeMap<(AgentId, StateId, ActionId), BTreeMap<StateId, ReputationCurve>>,
}

impl SubjectiveTransitionSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        actor: AgentId,
        s: StateId,
        a: ActionId,
        dest: StateId,
        curve: ReputationCurve,
    ) {
        self.rows
            .entry((actor, s, a))
            .or_default()
            .insert(dest, curve);
    }

    pub fn row(
        &self,
        actor: AgentId,
        s: StateId,
        a: ActionId,
    ) -> Option<&BTreeMap<StateId, ReputationCurve>> {
        self.rows.get(&(actor, s, a))
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<
        Item = (
            (AgentId, StateId, ActionId),
            &BTreeMap<StateId, ReputationCurve>,
        ),
    > + '_ {
        self.rows.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `AD_g(h, s)`: a distribution over all actions for every agent and state.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionDistribution {
    agents: usize,
    states: usize,
    actions: usize,
    probs: Vec<f64>,
}

impl ActionDistribution {
    pub fn uniform(agents: usize, states: usize, actions: usize) -> Self {
        let p = if actions == 0 {
            0.0
        } else {
            1.0 / actions as f64
        };
        Self {
            agents,
            states,
            actions,
            probs: vec![p; agents * states * actions],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.agents, self.states, self.actions)
    }

    fn offset(&self, h: AgentId, s: StateId) -> usize {
        (h.0 * self.states + s.0) * self.actions
    }

    pub fn row(&self, h: AgentId, s: StateId) -> &[f64] {
        let o = self.offset(h, s);
        &self.probs[o..o + self.actions]
    }

    pub fn row_mut(&mut self, h: AgentId, s: StateId) -> &mut [f64] {
        let o = self.offset(h, s);
        &mut self.probs[o..o + self.actions]
    }

    pub fn get(&self, h: AgentId, s: StateId, a: ActionId) -> f64 {
        self.row(h, s)[a.0]
    }

    pub fn rows(&self) -> impl Iterator<Item = (AgentId, StateId, &[f64])> + '_ {
        let states = self.states;
        self.probs
            .chunks(self.actions.max(1))
            .enumerate()
            .map(move |(i, row)| (AgentId(i / states), StateId(i % states), row))
    }
}

/// `Img_g(h, i)`: what `g` believes `i` thinks of `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageFunction {
    agents: usize,
    values: Vec<f64>,
}

impl ImageFunction {
    /// Neutral image: 0 everywhere except the unit diagonal.
    pub fn neutral(agents: usize) -> Self {
        let mut values = vec![0.0; agents * agents];
        for i in 0..agents {
            values[i * agents + i] = 1.0;
        }
        Self { agents, values }
    }

    pub fn agent_count(&self) -> usize {
        self.agents
    }

    pub fn get(&self, h: AgentId, i: AgentId) -> f64 {
        self.values[h.0 * self.agents + i.0]
    }

    /// Sets an entry. Diagonal writes are stored as given so that
    /// validation can report them.
    pub fn set(&mut self, h: AgentId, i: AgentId, value: f64) {
        self.values[h.0 * self.agents + i.0] = value;
    }

    pub fn pin_diagonal(&mut self) {
        for i in 0..self.agents {
            self.values[i * self.agents + i] = 1.0;
        }
    }
}

/// Subjective knowledge of one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentKnowledge {
    pub owner: AgentId,
    pub subjective: SubjectiveTransitionSpec,
    pub ad: ActionDistribution,
    pub img: ImageFunction,
}

impl AgentKnowledge {
    /// Knowledge with uniform action distributions and a neutral image.
    pub fn neutral(owner: AgentId, agents: usize, states: usize, actions: usize) -> Self {
        Self {
            owner,
            subjective: SubjectiveTransitionSpec::new(),
            ad: ActionDistribution::uniform(agents, states, actions),
            img: ImageFunction::neutral(agents),
        }
    }

    pub fn epistemic(&self, state: StateId) -> EpistemicState {
        EpistemicState {
            state,
            ad: self.ad.clone(),
            img: self.img.clone(),
        }
    }
}

/// Search-node payload: physical state, action distribution and image.
#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicState {
    pub state: StateId,
    pub ad: ActionDistribution,
    pub img: ImageFunction,
}

/// Which action-distribution rows an observation updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum UpdateScope {
    /// Every `(agent, state)` row, as the set-comprehension form reads.
    Literal,
    /// Only the row of the agent that acted, in the state it acted in.
    #[default]
    Restricted,
}

impl UpdateScope {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdateScope::Literal => "literal",
            UpdateScope::Restricted => "restricted",
        }
    }
}

impl std::str::FromStr for UpdateScope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(UpdateScope::Literal),
            "restricted" => Ok(UpdateScope::Restricted),
            other => Err(format!("unknown update scope `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparameters {
    /// Look-ahead depth `D`.
    pub depth: usize,
    /// Discount factor in `[0, 1]`.
    pub gamma: f64,
    /// Laplace smoothing parameter, `>= 0`.
    pub eta: f64,
    /// Weight of the impact received by `h` versus caused by `h`, in `[0, 1]`.
    pub delta: f64,
    /// Number of time-steps of an episode.
    pub horizon: usize,
    pub seed: u64,
    pub scope: UpdateScope,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            depth: 3,
            gamma: 0.7,
            eta: 0.1,
            delta: 0.5,
            horizon: 100,
            seed: 0,
            scope: UpdateScope::Restricted,
        }
    }
}

impl Hyperparameters {
    /// Range violations, one message each.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(0.0..=1.0).contains(&self.gamma) {
            out.push(format!("gamma {} outside [0, 1]", self.gamma));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            out.push(format!("eta {} must be a finite value >= 0", self.eta));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            out.push(format!("delta {} outside [0, 1]", self.delta));
        }
        if self.horizon == 0 {
            out.push("horizon must be positive".to_string());
        }
        out
    }
}
