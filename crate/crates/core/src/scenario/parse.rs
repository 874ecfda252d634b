//! Line-oriented scenario text.
//!
//! ```text
//! repnet-scenario v1
//! name trading
//! description one planner, one scripted partner
//!
//! [agents]
//! A repnet
//! B scripted
//! [states]
//! s0 start
//! s1
//! [actions]
//! offer objective
//! wait objective
//! [transitions]
//! A * offer : s1=1
//! * * wait : .=1
//! [schedule B]
//! default wait
//! ```
//!
//! `#` starts a comment. Sections are processed in a fixed order, so they
//! may appear in any order in the file; later lines of a table override
//! earlier ones.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{
    Action, ActionDistribution, ActionId, ActionKind, AgentId, AgentKnowledge, Hyperparameters,
    ImageFunction, ReputationCurve, StateId, System, ValidationReport,
};
use crate::simulator::{Controller, MetricSpec, Schedule, ScheduleEntry};

use super::{AgentSetup, Scenario};

pub(super) const HEADER: &str = "repnet-scenario v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The text parsed but the scenario breaks a model or scenario
    /// invariant; `message` names the offending entries.
    #[error("invalid scenario:\n{message}")]
    Invalid {
        report: ValidationReport,
        message: String,
    },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("`{0}` is neither a readable file nor a bundled scenario")]
    NotFound(String),
}

type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    raw: &'a str,
    toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, tok: usize, message: impl Into<String>) -> ScenarioError {
        let column = self
            .toks
            .get(tok)
            .map_or_else(|| self.raw.chars().count() + 1, |t| t.col);
        ScenarioError::Syntax {
            line: self.no,
            column,
            message: message.into(),
        }
    }

    fn tok(&self, i: usize, what: &str) -> Result<Tok<'a>> {
        self.toks
            .get(i)
            .copied()
            .ok_or_else(|| self.err(i, format!("expected {what}")))
    }

    fn expect_len(&self, n: usize, shape: &str) -> Result<()> {
        if self.toks.len() < n {
            return Err(self.err(self.toks.len(), format!("expected `{shape}`")));
        }
        if self.toks.len() > n {
            return Err(self.err(n, format!("unexpected token; expected `{shape}`")));
        }
        Ok(())
    }
}

struct Section<'a> {
    header: Line<'a>,
    name: &'a str,
    arg: Option<Tok<'a>>,
    lines: Vec<Line<'a>>,
}

fn tokenize(no: usize, raw: &str) -> Line<'_> {
    let mut toks = Vec::new();
    let mut start = None;
    for (col, (i, c)) in raw.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((s, scol)) = start.take() {
                toks.push(Tok {
                    text: &raw[s..i],
                    col: scol,
                });
            }
        } else if start.is_none() {
            start = Some((i, col + 1));
        }
    }
    if let Some((s, scol)) = start {
        toks.push(Tok {
            text: &raw[s..],
            col: scol,
        });
    }
    Line { no, raw, toks }
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !s.starts_with('-')
}

/// Parses a number, allowing a `num/den` fraction.
fn number(line: &Line, i: usize, text: &str) -> Result<f64> {
    let parsed = match text.split_once('/') {
        Some((n, d)) => match (n.parse::<f64>(), d.parse::<f64>()) {
            (Ok(n), Ok(d)) if d != 0.0 => Ok(n / d),
            _ => Err(()),
        },
        None => text.parse::<f64>().map_err(|_| ()),
    };
    match parsed {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(line.err(i, format!("`{text}` is not a finite number"))),
    }
}

fn integer(line: &Line, i: usize, text: &str) -> Result<usize> {
    text.parse::<usize>()
        .map_err(|_| line.err(i, format!("`{text}` is not a non-negative integer")))
}

/// Name tables built from the first three sections.
struct Names<'s> {
    sys: &'s System,
}

impl Names<'_> {
    fn agent(&self, line: &Line, i: usize) -> Result<AgentId> {
        let t = line.tok(i, "an agent name")?;
        self.sys
            .find_agent(t.text)
            .ok_or_else(|| line.err(i, format!("unknown agent `{}`", t.text)))
    }

    fn state(&self, line: &Line, i: usize) -> Result<StateId> {
        let t = line.tok(i, "a state name")?;
        self.sys
            .find_state(t.text)
            .ok_or_else(|| line.err(i, format!("unknown state `{}`", t.text)))
    }

    fn action(&self, line: &Line, i: usize) -> Result<ActionId> {
        let t = line.tok(i, "an action name")?;
        self.sys
            .find_action(t.text)
            .ok_or_else(|| line.err(i, format!("unknown action `{}`", t.text)))
    }

    fn agents_or_all(&self, line: &Line, i: usize) -> Result<Vec<AgentId>> {
        if line.tok(i, "an agent name or `*`")?.text == "*" {
            Ok(self.sys.agents().collect())
        } else {
            Ok(vec![self.agent(line, i)?])
        }
    }

    fn states_or_all(&self, line: &Line, i: usize) -> Result<Vec<StateId>> {
        if line.tok(i, "a state name or `*`")?.text == "*" {
            Ok(self.sys.states().collect())
        } else {
            Ok(vec![self.state(line, i)?])
        }
    }

    fn state_or_any(&self, line: &Line, i: usize) -> Result<Option<StateId>> {
        if line.tok(i, "a state name or `*`")?.text == "*" {
            Ok(None)
        } else {
            Ok(Some(self.state(line, i)?))
        }
    }
}

fn split_sections(text: &str) -> Result<(Vec<Line<'_>>, Vec<Section<'_>>)> {
    let mut preamble = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let content = strip_comment(raw);
        let line = tokenize(no, content);
        if line.toks.is_empty() {
            continue;
        }
        if !seen_header {
            let words: Vec<&str> = line.toks.iter().map(|t| t.text).collect();
            if words.join(" ") != HEADER {
                return Err(line.err(0, format!("expected header `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let first = line.toks[0].text;
        if first.starts_with('[') {
            let trimmed = content.trim();
            let Some(inner) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(line.err(0, "malformed section header"));
            };
            let inner_line = tokenize(no, inner);
            let name = inner_line
                .toks
                .first()
                .map(|t| t.text)
                .ok_or_else(|| line.err(0, "empty section header"))?;
            let arg = match inner_line.toks.len() {
                1 => None,
                2 => Some(Tok {
                    text: inner_line.toks[1].text,
                    // shift past the indentation and the opening bracket
                    col: inner_line.toks[1].col + line.toks[0].col,
                }),
                _ => return Err(line.err(0, "section header takes at most one argument")),
            };
            sections.push(Section {
                header: line,
                name,
                arg,
                lines: Vec::new(),
            });
        } else if let Some(sec) = sections.last_mut() {
            sec.lines.push(line);
        } else {
            preamble.push(line);
        }
    }
    if !seen_header {
        return Err(ScenarioError::Syntax {
            line: 1,
            column: 1,
            message: format!("expected header `{HEADER}`"),
        });
    }
    Ok((preamble, sections))
}

const GLOBAL_SECTIONS: &[&str] = &[
    "agents",
    "states",
    "actions",
    "counterparts",
    "impacts",
    "transitions",
    "hyper",
    "metrics",
];
const AGENT_SECTIONS: &[&str] = &["subjective", "initial", "schedule", "mask"];

/// Parses and validates a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let (preamble, sections) = split_sections(text)?;

    let mut name = String::new();
    let mut description = String::new();
    for line in &preamble {
        let key = line.toks[0].text;
        let rest = line.raw[line.raw.find(key).unwrap() + key.len()..]
            .trim()
            .to_string();
        match key {
            "name" => name = rest,
            "description" => description = rest,
            other => return Err(line.err(0, format!("unknown key `{other}`"))),
        }
    }

    let mut global: BTreeMap<&str, &Section> = BTreeMap::new();
    let mut per_agent: BTreeMap<(&str, &str), &Section> = BTreeMap::new();
    for sec in &sections {
        if GLOBAL_SECTIONS.contains(&sec.name) {
            if let Some(arg) = sec.arg {
                return Err(ScenarioError::Syntax {
                    line: sec.header.no,
                    column: arg.col,
                    message: format!("section [{}] takes no argument", sec.name),
                });
            }
            if global.insert(sec.name, sec).is_some() {
                return Err(sec
                    .header
                    .err(0, format!("duplicate section [{}]", sec.name)));
            }
        } else if AGENT_SECTIONS.contains(&sec.name) {
            let Some(arg) = sec.arg else {
                return Err(sec
                    .header
                    .err(0, format!("section [{}] needs an agent name", sec.name)));
            };
            if per_agent.insert((sec.name, arg.text), sec).is_some() {
                return Err(sec
                    .header
                    .err(0, format!("duplicate section [{} {}]", sec.name, arg.text)));
            }
        } else {
            return Err(sec.header.err(0, format!("unknown section [{}]", sec.name)));
        }
    }

    let required = |n: &str| -> Result<&Section> {
        global.get(n).copied().ok_or_else(|| ScenarioError::Syntax {
            line: 1,
            column: 1,
            message: format!("missing section [{n}]"),
        })
    };

    // agents
    let mut agent_names = Vec::new();
    let mut repnet = Vec::new();
    for line in &required("agents")?.lines {
        line.expect_len(2, "NAME repnet|scripted")?;
        let n = line.toks[0].text;
        if !is_name(n) {
            return Err(line.err(0, format!("invalid name `{n}`")));
        }
        if agent_names.iter().any(|x| x == n) {
            return Err(line.err(0, format!("duplicate agent `{n}`")));
        }
        repnet.push(match line.toks[1].text {
            "repnet" => true,
            "scripted" => false,
            other => return Err(line.err(1, format!("unknown controller `{other}`"))),
        });
        agent_names.push(n.to_string());
    }

    // states
    let mut state_names = Vec::new();
    let mut start = None;
    for line in &required("states")?.lines {
        let n = line.tok(0, "a state name")?.text;
        if !is_name(n) {
            return Err(line.err(0, format!("invalid name `{n}`")));
        }
        if state_names.iter().any(|x| x == n) {
            return Err(line.err(0, format!("duplicate state `{n}`")));
        }
        match line.toks.len() {
            1 => {}
            2 if line.toks[1].text == "start" => {
                if start.is_some() {
                    return Err(line.err(1, "more than one start state"));
                }
                start = Some(StateId(state_names.len()));
            }
            _ => return Err(line.err(1, "expected `NAME [start]`")),
        }
        state_names.push(n.to_string());
    }
    if state_names.is_empty() || agent_names.is_empty() {
        return Err(ScenarioError::Syntax {
            line: 1,
            column: 1,
            message: "a scenario needs at least one agent and one state".into(),
        });
    }

    // actions
    let mut actions: Vec<Action> = Vec::new();
    for line in &required("actions")?.lines {
        line.expect_len(2, "NAME objective|subjective")?;
        let n = line.toks[0].text;
        if !is_name(n) {
            return Err(line.err(0, format!("invalid name `{n}`")));
        }
        if actions.iter().any(|a| a.name == n) {
            return Err(line.err(0, format!("duplicate action `{n}`")));
        }
        let kind = match line.toks[1].text {
            "objective" => ActionKind::Objective,
            "subjective" => ActionKind::Subjective,
            other => return Err(line.err(1, format!("unknown action kind `{other}`"))),
        };
        actions.push(Action {
            name: n.to_string(),
            kind,
        });
    }
    if actions.is_empty() {
        return Err(required("actions")?.header.err(0, "no actions declared"));
    }

    let mut system = System::new(agent_names, state_names, actions);
    let (na, ns, nx) = (
        system.agent_count(),
        system.state_count(),
        system.action_count(),
    );

    // counterparts
    if let Some(sec) = global.get("counterparts") {
        for line in &sec.lines {
            line.expect_len(3, "OBJECTIVE -> SUBJECTIVE")?;
            if line.toks[1].text != "->" {
                return Err(line.err(1, "expected `->`"));
            }
            let names = Names { sys: &system };
            let (o, s) = (names.action(line, 0)?, names.action(line, 2)?);
            system
                .add_counterpart(o, s)
                .map_err(|e| line.err(0, e.to_string()))?;
        }
    }

    // impacts
    if let Some(sec) = global.get("impacts") {
        for line in &sec.lines {
            line.expect_len(5, "TARGET ACTOR STATE|* ACTION VALUE")?;
            let names = Names { sys: &system };
            let target = names.agent(line, 0)?;
            let actor = names.agent(line, 1)?;
            let states = names.states_or_all(line, 2)?;
            let a = names.action(line, 3)?;
            let v = number(line, 4, line.toks[4].text)?;
            for s in states {
                system
                    .set_impact(target, actor, s, a, v)
                    .map_err(|e| line.err(0, e.to_string()))?;
            }
        }
    }

    // transitions
    if let Some(sec) = global.get("transitions") {
        for line in &sec.lines {
            let shape = "AGENT|* STATE|* ACTION : DEST=P ...";
            if line.toks.len() < 5 || line.toks[3].text != ":" {
                return Err(line.err(line.toks.len().min(3), format!("expected `{shape}`")));
            }
            let names = Names { sys: &system };
            let agents = names.agents_or_all(line, 0)?;
            let states = names.states_or_all(line, 1)?;
            let a = names.action(line, 2)?;
            if system.action_kind(a).ok() != Some(ActionKind::Objective) {
                return Err(line.err(2, "transitions are only defined for objective actions"));
            }
            // `.` is resolved per expanded state
            let mut entries: Vec<(Option<StateId>, f64)> = Vec::new();
            for i in 4..line.toks.len() {
                let t = line.toks[i].text;
                let Some((d, p)) = t.split_once('=') else {
                    return Err(line.err(i, "expected `DEST=P`"));
                };
                let dest = if d == "." {
                    None
                } else {
                    Some(
                        system
                            .find_state(d)
                            .ok_or_else(|| line.err(i, format!("unknown state `{d}`")))?,
                    )
                };
                entries.push((dest, number(line, i, p)?));
            }
            for &g in &agents {
                for &s in &states {
                    let mut row = vec![0.0; ns];
                    for &(d, p) in &entries {
                        row[d.unwrap_or(s).0] += p;
                    }
                    system
                        .set_objective_row(g, s, a, row)
                        .map_err(|e| line.err(2, e.to_string()))?;
                }
            }
        }
    }

    let names = Names { sys: &system };

    // per-agent sections must name an agent of the matching kind
    for (&(kind, agent), sec) in &per_agent {
        let arg = sec.arg.unwrap();
        let Some(g) = system.find_agent(agent) else {
            return Err(ScenarioError::Syntax {
                line: sec.header.no,
                column: arg.col,
                message: format!("unknown agent `{agent}`"),
            });
        };
        let wants_repnet = kind != "schedule";
        if repnet[g.0] != wants_repnet {
            return Err(ScenarioError::Syntax {
                line: sec.header.no,
                column: arg.col,
                message: format!(
                    "[{kind}] applies to {} agents only",
                    if wants_repnet { "repnet" } else { "scripted" }
                ),
            });
        }
    }

    let mut agents = Vec::with_capacity(na);
    for g in system.agents() {
        let gname = system.agent_name(g);
        if repnet[g.0] {
            let mut k = AgentKnowledge::neutral(g, na, ns, nx);
            if let Some(sec) = per_agent.get(&("subjective", gname)) {
                parse_subjective(&names, sec, &mut k)?;
            }
            if let Some(sec) = per_agent.get(&("initial", gname)) {
                parse_initial(&names, sec, &mut k.ad, &mut k.img)?;
            }
            let mask = match per_agent.get(&("mask", gname)) {
                Some(sec) => parse_entries(&names, sec, false)?.0,
                None => Vec::new(),
            };
            agents.push(AgentSetup {
                controller: Controller::RepNet { mask },
                knowledge: Some(k),
            });
        } else {
            let Some(sec) = per_agent.get(&("schedule", gname)) else {
                return Err(ScenarioError::Syntax {
                    line: required("agents")?.header.no,
                    column: 1,
                    message: format!("scripted agent `{gname}` has no [schedule {gname}] section"),
                });
            };
            let (entries, default) = parse_entries(&names, sec, true)?;
            agents.push(AgentSetup {
                controller: Controller::Scripted(Schedule {
                    entries,
                    default: default.unwrap(),
                }),
                knowledge: None,
            });
        }
    }

    let hyper = match global.get("hyper") {
        Some(sec) => parse_hyper(sec)?,
        None => Hyperparameters::default(),
    };

    let metrics = match global.get("metrics") {
        Some(sec) => parse_metrics(&names, sec)?,
        None => Vec::new(),
    };

    let scenario = Scenario {
        name,
        description,
        start: start.unwrap_or(StateId(0)),
        agents,
        hyper,
        metrics,
        system,
    };
    let report = scenario.validate();
    if report.is_clean() {
        Ok(scenario)
    } else {
        let message = report.render(&scenario.system);
        Err(ScenarioError::Invalid { report, message })
    }
}

fn parse_subjective(names: &Names, sec: &Section, k: &mut AgentKnowledge) -> Result<()> {
    for line in &sec.lines {
        let shape = "ACTOR STATE ACTION DEST : R=P ...";
        if line.toks.len() < 6 || line.toks[4].text != ":" {
            return Err(line.err(line.toks.len().min(4), format!("expected `{shape}`")));
        }
        let actor = names.agent(line, 0)?;
        let s = names.state(line, 1)?;
        let a = names.action(line, 2)?;
        let dest = names.state(line, 3)?;
        let mut points = Vec::new();
        for i in 5..line.toks.len() {
            let t = line.toks[i].text;
            let Some((r, p)) = t.split_once('=') else {
                return Err(line.err(i, "expected `R=P`"));
            };
            points.push((number(line, i, r)?, number(line, i, p)?));
        }
        k.subjective
            .insert(actor, s, a, dest, ReputationCurve::new(points));
    }
    Ok(())
}

fn parse_initial(
    names: &Names,
    sec: &Section,
    ad: &mut ActionDistribution,
    img: &mut ImageFunction,
) -> Result<()> {
    for line in &sec.lines {
        match line.toks[0].text {
            "image" => {
                line.expect_len(4, "image H I VALUE")?;
                let h = names.agent(line, 1)?;
                let i = names.agent(line, 2)?;
                img.set(h, i, number(line, 3, line.toks[3].text)?);
            }
            "ad" => {
                if line.toks.len() < 4 {
                    return Err(line.err(line.toks.len(), "expected `ad AGENT STATE ACTION=P ...`"));
                }
                let h = names.agent(line, 1)?;
                let s = names.state(line, 2)?;
                let mut row = vec![0.0; names.sys.action_count()];
                for i in 3..line.toks.len() {
                    let t = line.toks[i].text;
                    let Some((a, p)) = t.split_once('=') else {
                        return Err(line.err(i, "expected `ACTION=P`"));
                    };
                    let a = names
                        .sys
                        .find_action(a)
                        .ok_or_else(|| line.err(i, format!("unknown action `{a}`")))?;
                    row[a.0] = number(line, i, p)?;
                }
                ad.row_mut(h, s).copy_from_slice(&row);
            }
            other => return Err(line.err(0, format!("unknown key `{other}`"))),
        }
    }
    Ok(())
}

/// Schedule or mask entries `START..END STATE|* ACTION`, plus `default
/// ACTION` when `with_default`.
fn parse_entries(
    names: &Names,
    sec: &Section,
    with_default: bool,
) -> Result<(Vec<ScheduleEntry>, Option<ActionId>)> {
    let mut entries = Vec::new();
    let mut default = None;
    for line in &sec.lines {
        if with_default && line.toks[0].text == "default" {
            line.expect_len(2, "default ACTION")?;
            if default.is_some() {
                return Err(line.err(0, "duplicate default"));
            }
            default = Some(names.action(line, 1)?);
            continue;
        }
        line.expect_len(3, "START..END STATE|* ACTION")?;
        let range = line.toks[0].text;
        let Some((a, b)) = range.split_once("..") else {
            return Err(line.err(0, "expected an interval `START..END`"));
        };
        let start = integer(line, 0, a)?;
        let end = integer(line, 0, b)?;
        if start >= end {
            return Err(line.err(0, format!("empty interval `{range}`")));
        }
        entries.push(ScheduleEntry {
            start,
            end,
            state: names.state_or_any(line, 1)?,
            action: names.action(line, 2)?,
        });
    }
    if with_default && default.is_none() {
        return Err(sec.header.err(0, "schedule needs a `default ACTION` line"));
    }
    Ok((entries, default))
}

fn parse_hyper(sec: &Section) -> Result<Hyperparameters> {
    let mut h = Hyperparameters::default();
    let mut seen = BTreeSet::new();
    for line in &sec.lines {
        line.expect_len(2, "KEY VALUE")?;
        let key = line.toks[0].text;
        let v = line.toks[1].text;
        if !seen.insert(key) {
            return Err(line.err(0, format!("duplicate key `{key}`")));
        }
        match key {
            "depth" => h.depth = integer(line, 1, v)?,
            "gamma" => h.gamma = number(line, 1, v)?,
            "eta" => h.eta = number(line, 1, v)?,
            "delta" => h.delta = number(line, 1, v)?,
            "horizon" => h.horizon = integer(line, 1, v)?,
            "seed" => {
                h.seed = v
                    .parse()
                    .map_err(|_| line.err(1, format!("`{v}` is not a valid seed")))?
            }
            "scope" => h.scope = v.parse().map_err(|e: String| line.err(1, e))?,
            other => return Err(line.err(0, format!("unknown key `{other}`"))),
        }
    }
    Ok(h)
}

fn parse_metrics(names: &Names, sec: &Section) -> Result<Vec<MetricSpec>> {
    let mut out = Vec::new();
    for line in &sec.lines {
        let m = match line.toks[0].text {
            "reputation" => {
                line.expect_len(3, "reputation OBSERVER SUBJECT")?;
                MetricSpec::Reputation {
                    observer: names.agent(line, 1)?,
                    subject: names.agent(line, 2)?,
                }
            }
            "image" => {
                line.expect_len(4, "image OBSERVER H I")?;
                MetricSpec::Image {
                    observer: names.agent(line, 1)?,
                    h: names.agent(line, 2)?,
                    i: names.agent(line, 3)?,
                }
            }
            "ad" => {
                line.expect_len(5, "ad OBSERVER AGENT STATE ACTION")?;
                MetricSpec::ActionProbability {
                    observer: names.agent(line, 1)?,
                    agent: names.agent(line, 2)?,
                    state: names.state(line, 3)?,
                    action: names.action(line, 4)?,
                }
            }
            "frequency" => {
                line.expect_len(3, "frequency AGENT ACTION")?;
                MetricSpec::Frequency {
                    agent: names.agent(line, 1)?,
                    action: names.action(line, 2)?,
                }
            }
            "choice" => {
                if line.toks.len() < 3 {
                    return Err(line.err(line.toks.len(), "expected `choice AGENT ACTION ...`"));
                }
                MetricSpec::Choice {
                    agent: names.agent(line, 1)?,
                    actions: (2..line.toks.len())
                        .map(|i| names.action(line, i))
                        .collect::<Result<_>>()?,
                }
            }
            other => return Err(line.err(0, format!("unknown metric `{other}`"))),
        };
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "repnet-scenario v1
name tiny
[agents]
A repnet
[states]
s0
[actions]
stay objective
[transitions]
A s0 stay : s0=1
";

    #[test]
    fn defaults_apply() {
        let sc = parse_scenario(MINIMAL).unwrap();
        assert_eq!(sc.hyper, Hyperparameters::default());
        assert_eq!(sc.hyper.depth, 3);
        assert_eq!(sc.hyper.gamma, 0.7);
        assert_eq!(sc.hyper.eta, 0.1);
        assert_eq!(sc.hyper.delta, 0.5);
        assert_eq!(sc.name, "tiny");
    }

    fn syntax_at(text: &str) -> (usize, usize, String) {
        match parse_scenario(text) {
            Err(ScenarioError::Syntax {
                line,
                column,
                message,
            }) => (line, column, message),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_has_position() {
        let text = MINIMAL.replace("[transitions]", "[hyper]\n  depht 2\n[transitions]");
        let (line, col, msg) = syntax_at(&text);
        assert_eq!((line, col), (10, 3));
        assert!(msg.contains("depht"), "{msg}");
    }

    #[test]
    fn unknown_section_rejected() {
        let text = format!("{MINIMAL}[extras]\n");
        let (line, _, msg) = syntax_at(&text);
        assert_eq!(line, 11);
        assert!(msg.contains("extras"));
    }

    #[test]
    fn bad_number_column() {
        let text = MINIMAL.replace("s0=1", "s0=x");
        let (line, col, _) = syntax_at(&text);
        assert_eq!((line, col), (10, 13));
    }

    #[test]
    fn missing_header() {
        let (line, col, _) = syntax_at("[agents]\nA repnet\n");
        assert_eq!((line, col), (1, 1));
    }

    #[test]
    fn short_row_is_semantic_error() {
        let text = MINIMAL.replace("s0=1", "s0=0.8");
        let Err(ScenarioError::Invalid { report, message }) = parse_scenario(&text) else {
            panic!("expected a validation failure");
        };
        assert_eq!(report.violations.len(), 1);
        assert!(message.contains("sums to 0.8"), "{message}");
    }

    #[test]
    fn fractions_and_wildcards() {
        let text = "repnet-scenario v1
[agents]
A repnet
B scripted
[states]
s0
s1 start
[actions]
go objective
[transitions]
* * go : .=1/3 s1=2/3
[schedule B]
default go
";
        let sc = parse_scenario(text).unwrap();
        assert_eq!(sc.start, StateId(1));
        let row = sc
            .system
            .objective()
            .row(AgentId(1), StateId(0), ActionId(0))
            .unwrap();
        assert_eq!(row, &[1.0 / 3.0, 2.0 / 3.0]);
        let row = sc
            .system
            .objective()
            .row(AgentId(0), StateId(1), ActionId(0))
            .unwrap();
        assert_eq!(row, &[0.0, 1.0 / 3.0 + 2.0 / 3.0]);
    }
}
