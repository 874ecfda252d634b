use std::collections::BTreeMap;

use crate::error::{ModelError, Result};

use super::ids::{ActionId, ActionKind, AgentId, StateId};

/// A named action and its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: String,
    pub kind: ActionKind,
}

/// Partial mapping from objective actions to their subjective counterparts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CounterpartMap {
    pairs: BTreeMap<ActionId, ActionId>,
}

impl CounterpartMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, objective: ActionId, subjective: ActionId) {
        self.pairs.insert(objective, subjective);
    }

    pub fn get(&self, objective: ActionId) -> Option<ActionId> {
        self.pairs.get(&objective).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ActionId, ActionId)> + '_ {
        self.pairs.iter().map(|(&o, &s)| (o, s))
    }
}

/// Returns the subjective counterpart of `action`, if the map defines one.
pub fn counterpart(map: &CounterpartMap, action: ActionId) -> Option<ActionId> {
    map.get(action)
}

/// Dense impact table `I(g, h, s, a)`: the impact on `g` of `h` performing
/// `a` in `s`. Entries that were never set are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactTable {
    agents: usize,
    states: usize,
    actions: usize,
    values: Vec<f64>,
}

impl ImpactTable {
    pub fn new(agents: usize, states: usize, actions: usize) -> Self {
        Self {
            agents,
            states,
            actions,
            values: vec![0.0; agents * agents * states * actions],
        }
    }

    fn offset(&self, target: AgentId, actor: AgentId, s: StateId, a: ActionId) -> usize {
        ((target.0 * self.agents + actor.0) * self.states + s.0) * self.actions + a.0
    }

    pub fn get(&self, target: AgentId, actor: AgentId, s: StateId, a: ActionId) -> f64 {
        self.values[self.offset(target, actor, s, a)]
    }

    pub fn set(&mut self, target: AgentId, actor: AgentId, s: StateId, a: ActionId, value: f64) {
        let i = self.offset(target, actor, s, a);
        self.values[i] = value;
    }

    /// Non-zero entries in `(target, actor, state, action)` order.
    pub fn nonzero(&self) -> impl Iterator<Item = (AgentId, AgentId, StateId, ActionId, f64)> + '_ {
        let (n, ns, na) = (self.agents, self.states, self.actions);
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(i, &v)| {
                let a = i % na;
                let s = (i / na) % ns;
                let h = (i / (na * ns)) % n;
                let g = i / (na * ns * n);
                (AgentId(g), AgentId(h), StateId(s), ActionId(a), v)
            })
    }
}

/// Image update rule selector. Only the saturating additive rule ships.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ImageUpdateRule {
    #[default]
    Saturating,
}

impl ImageUpdateRule {
    pub fn apply(self, value: f64, impact: f64) -> f64 {
        match self {
            ImageUpdateRule::Saturating => crate::estimation::image_update(value, impact),
        }
    }
}

/// Objective transition rows `OT(h, s, a, ·)`, dense over destination states.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjectiveTransitions {
    rows: BTreeMap<(AgentId, StateId, ActionId), Vec<f64>>,
}

impl ObjectiveTransitions {
    pub fn row(&self, agent: AgentId, s: StateId, a: ActionId) -> Option<&[f64]> {
        self.rows.get(&(agent, s, a)).map(Vec::as_slice)
    }

    pub fn insert(&mut self, agent: AgentId, s: StateId, a: ActionId, row: Vec<f64>) {
        self.rows.insert((agent, s, a), row);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((AgentId, StateId, ActionId), &[f64])> + '_ {
        self.rows.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The shared world model: agents, states, actions, counterparts, impacts,
/// the image update rule and the objective transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    agents: Vec<String>,
    states: Vec<String>,
    actions: Vec<Action>,
    counterparts: CounterpartMap,
    impacts: ImpactTable,
    update: ImageUpdateRule,
    objective: ObjectiveTransitions,
}

impl System {
    pub fn new(agents: Vec<String>, states: Vec<String>, actions: Vec<Action>) -> Self {
        let impacts = ImpactTable::new(agents.len(), states.len(), actions.len());
        Self {
            agents,
            states,
            actions,
            counterparts: CounterpartMap::new(),
            impacts,
            update: ImageUpdateRule::default(),
            objective: ObjectiveTransitions::default(),
        }
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len()).map(AgentId)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len()).map(ActionId)
    }

    pub fn objective_actions(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.actions()
            .filter(|&a| self.actions[a.0].kind == ActionKind::Objective)
    }

    pub fn agent_name(&self, g: AgentId) -> &str {
        &self.agents[g.0]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn action(&self, a: ActionId) -> &Action {
        &self.actions[a.0]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a.0].name
    }

    pub fn action_kind(&self, a: ActionId) -> Result<ActionKind> {
        self.actions
            .get(a.0)
            .map(|x| x.kind)
            .ok_or(ModelError::UnknownAction(a))
    }

    pub fn find_agent(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|n| n == name).map(AgentId)
    }

    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name).map(StateId)
    }

    pub fn find_action(&self, name: &str) -> Option<ActionId> {
        self.actions
            .iter()
            .position(|x| x.name == name)
            .map(ActionId)
    }

    pub fn counterparts(&self) -> &CounterpartMap {
        &self.counterparts
    }

    pub fn impacts(&self) -> &ImpactTable {
        &self.impacts
    }

    pub fn impact(&self, target: AgentId, actor: AgentId, s: StateId, a: ActionId) -> f64 {
        self.impacts.get(target, actor, s, a)
    }

    pub fn update_rule(&self) -> ImageUpdateRule {
        self.update
    }

    pub fn objective(&self) -> &ObjectiveTransitions {
        &self.objective
    }

    pub fn check_agent(&self, g: AgentId) -> Result<()> {
        (g.0 < self.agents.len())
            .then_some(())
            .ok_or(ModelError::UnknownAgent(g))
    }

    pub fn check_state(&self, s: StateId) -> Result<()> {
        (s.0 < self.states.len())
            .then_some(())
            .ok_or(ModelError::UnknownState(s))
    }

    pub fn check_action(&self, a: ActionId) -> Result<()> {
        self.action_kind(a).map(|_| ())
    }

    /// Sets `I(target, actor, s, a)`. Out-of-range values are stored as
    /// given and reported by validation.
    pub fn set_impact(
        &mut self,
        target: AgentId,
        actor: AgentId,
        s: StateId,
        a: ActionId,
        value: f64,
    ) -> Result<()> {
        self.check_agent(target)?;
        self.check_agent(actor)?;
        self.check_state(s)?;
        self.check_action(a)?;
        self.impacts.set(target, actor, s, a, value);
        Ok(())
    }

    pub fn add_counterpart(&mut self, objective: ActionId, subjective: ActionId) -> Result<()> {
        self.check_action(objective)?;
        self.check_action(subjective)?;
        self.counterparts.insert(objective, subjective);
        Ok(())
    }

    /// Sets the objective row `OT(agent, s, a, ·)`; `row` is dense over states.
    pub fn set_objective_row(
        &mut self,
        agent: AgentId,
        s: StateId,
        a: ActionId,
        row: Vec<f64>,
    ) -> Result<()> {
        self.check_agent(agent)?;
        self.check_state(s)?;
        if self.action_kind(a)? != ActionKind::Objective {
            return Err(ModelError::NotObjective(a));
        }
        if row.len() != self.states.len() {
            return Err(ModelError::RowLength {
                expected: self.states.len(),
                found: row.len(),
            });
        }
        self.objective.insert(agent, s, a, row);
        Ok(())
    }

    /// Objective actions `agent` can execute in `s` (those with a defined row).
    pub fn available_actions(&self, agent: AgentId, s: StateId) -> Vec<ActionId> {
        self.objective_actions()
            .filter(|&a| self.objective.row(agent, s, a).is_some())
            .collect()
    }
}
