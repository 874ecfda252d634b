//! The `repnet` command line: validate scenarios, run episodes, and inspect
//! single planning decisions.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use repnet::model::{Hyperparameters, UpdateScope};
use repnet::planner::plan;
use repnet::scenario::{describe, load_scenario, write_run_outputs, Scenario, ScenarioError};
use repnet::simulator::run_episode;

/// Exit status for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit status for unreadable, unparsable or invalid input.
pub const EXIT_INVALID: i32 = 1;
/// Exit status for a failure while running a valid scenario.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "repnet",
    version,
    about = "Reputation-driven planning experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and check a scenario; prints `ok` or one line per problem.
    Validate {
        /// Scenario file, or the name of a bundled scenario (e.g. `experiments/exp1`).
        scenario: String,
    },
    /// Run an episode and write trace.csv, series.csv and windows.csv.
    Run {
        scenario: String,
        /// Number of time-steps (defaults to the scenario's horizon).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Plan once for a planning agent and print the action values.
    Plan {
        scenario: String,
        /// State to plan from (defaults to the scenario's start state).
        #[arg(long)]
        state: Option<String>,
        /// Planning agent (defaults to the first one).
        #[arg(long)]
        agent: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the bundled scenarios.
    List,
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Action-distribution update scope: `restricted` or `literal`.
    #[arg(long)]
    scope: Option<UpdateScope>,
}

impl Overrides {
    fn apply(&self, hyper: &mut Hyperparameters) {
        if let Some(d) = self.depth {
            hyper.depth = d;
        }
        if let Some(g) = self.gamma {
            hyper.gamma = g;
        }
        if let Some(e) = self.eta {
            hyper.eta = e;
        }
        if let Some(d) = self.delta {
            hyper.delta = d;
        }
        if let Some(s) = self.scope {
            hyper.scope = s;
        }
    }
}

/// Failure classified by exit status.
enum Failure {
    Invalid(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Invalid(e.into())
    }
}

/// Runs the command line and returns the process exit status.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_RUNTIME
        }
    }
}

fn execute<W: Write>(command: Command, out: &mut W) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::Runtime(e.into());
    match command {
        Command::Validate { scenario } => match load_scenario(&scenario) {
            Ok(sc) => {
                writeln!(out, "ok: {}", describe(&sc)).map_err(io)?;
                Ok(EXIT_OK)
            }
            Err(ScenarioError::Invalid { message, .. }) => {
                write!(out, "{message}").map_err(io)?;
                Ok(EXIT_INVALID)
            }
            Err(e) => Err(e.into()),
        },
        Command::Run {
            scenario,
            steps,
            seed,
            out: dir,
            overrides,
        } => {
            let mut sc = load_scenario(&scenario)?;
            overrides.apply(&mut sc.hyper);
            if let Some(t) = steps {
                sc.hyper.horizon = t;
            }
            if let Some(s) = seed {
                sc.hyper.seed = s;
            }
            check_hyper(&sc.hyper)?;
            let hyper = sc.hyper;
            let trace = run_episode(&sc, &hyper).map_err(|e| Failure::Runtime(e.into()))?;
            write_run_outputs(&trace, &dir)
                .with_context(|| format!("writing outputs to {}", dir.display()))
                .map_err(Failure::Runtime)?;
            writeln!(
                out,
                "{}: {} steps, {} records written to {}",
                sc.name,
                trace.horizon,
                trace.records.len(),
                dir.display()
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Plan {
            scenario,
            state,
            agent,
            overrides,
        } => {
            let mut sc = load_scenario(&scenario)?;
            overrides.apply(&mut sc.hyper);
            check_hyper(&sc.hyper)?;
            plan_once(&sc, state.as_deref(), agent.as_deref(), out)
        }
        Command::List => {
            for name in repnet::scenario::bundled_names() {
                writeln!(out, "experiments/{name}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn check_hyper(hyper: &Hyperparameters) -> Result<(), Failure> {
    let problems = hyper.problems();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(anyhow!(problems.join("; "))))
    }
}

fn plan_once<W: Write>(
    sc: &Scenario,
    state: Option<&str>,
    agent: Option<&str>,
    out: &mut W,
) -> Result<i32, Failure> {
    let sys = &sc.system;
    let s = match state {
        Some(name) => sys
            .find_state(name)
            .ok_or_else(|| Failure::Invalid(anyhow!("unknown state `{name}`")))?,
        None => sc.start,
    };
    let g = match agent {
        Some(name) => sys
            .find_agent(name)
            .ok_or_else(|| Failure::Invalid(anyhow!("unknown agent `{name}`")))?,
        None => sc
            .planners()
            .next()
            .ok_or_else(|| Failure::Invalid(anyhow!("scenario has no planning agent")))?,
    };
    let knowledge = sc
        .knowledge_of(g)
        .ok_or_else(|| Failure::Invalid(anyhow!("agent `{}` does not plan", sys.agent_name(g))))?;
    let result = plan(sys, knowledge, &knowledge.epistemic(s), &sc.hyper)
        .map_err(|e| Failure::Runtime(e.into()))?;
    let io = |e: std::io::Error| Failure::Runtime(e.into());
    for (a, q) in &result.q_values {
        writeln!(out, "{}\t{q}", sys.action_name(*a)).map_err(io)?;
    }
    writeln!(out, "chosen\t{}", sys.action_name(result.chosen)).map_err(io)?;
    writeln!(out, "value\t{}", result.value).map_err(io)?;
    Ok(EXIT_OK)
}
