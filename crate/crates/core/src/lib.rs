//! Reputation-driven online planning for self-interested agents in fully
//! observable stochastic environments.
//!
//! - [`model`]: the shared system, each agent's subjective knowledge, and the
//!   reputation-conditioned transition lookups.
//! - [`estimation`]: image, reputation and action-distribution learning.
//! - [`planner`]: perceived impact and depth-limited look-ahead search.
//! - [`simulator`]: turn-based episodes mixing planning and scripted agents.
//! - [`scenario`]: the scenario text format, bundled experiments and CSV output.

pub mod error;
pub mod estimation;
pub mod model;
pub mod planner;
pub mod scenario;
pub mod simulator;
pub mod testkit;

pub use error::{ModelError, RunError};
