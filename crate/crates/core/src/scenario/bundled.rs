use std::fs;
use std::path::Path;

use super::parse::{parse_scenario, ScenarioError};
use super::Scenario;

const BUNDLED: &[(&str, &str)] = &[
    ("exp1", include_str!("../../experiments/exp1.scn")),
    (
        "exp1_objective",
        include_str!("../../experiments/exp1_objective.scn"),
    ),
    ("exp2", include_str!("../../experiments/exp2.scn")),
];

/// Names of the bundled scenarios.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Text of a bundled scenario. Accepts `exp1`, `experiments/exp1` and
/// `experiments/exp1.scn`.
pub fn bundled(name: &str) -> Option<&'static str> {
    let key = name.strip_prefix("experiments/").unwrap_or(name);
    let key = key.strip_suffix(".scn").unwrap_or(key);
    BUNDLED.iter().find(|(n, _)| *n == key).map(|(_, t)| *t)
}

/// Scenario text for `spec`: the file at that path if one exists, otherwise
/// the bundled scenario of that name.
pub fn resolve_source(spec: &str) -> Result<String, ScenarioError> {
    let path = Path::new(spec);
    if path.is_file() {
        return fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: spec.to_string(),
            message: e.to_string(),
        });
    }
    bundled(spec)
        .map(str::to_string)
        .ok_or_else(|| ScenarioError::NotFound(spec.to_string()))
}

/// Resolves and parses `spec`.
pub fn load_scenario(spec: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario(&resolve_source(spec)?)
}
