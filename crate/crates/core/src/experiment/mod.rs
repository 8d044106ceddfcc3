//! Scenario files, initial data, mass sweeps and run outputs.

pub mod output;
pub mod scenario;
pub mod sweep;

use std::path::Path;

pub use output::{emit_outputs, Manifest, OutputPaths};
pub use scenario::{
    make_initial_data, parse_mass, parse_mass_list, InitialDataSummary, InitialFamily, Scenario,
};
pub use sweep::{sweep_mass, worker_count, SweepEntry, SweepResult, WORKERS_ENV};

use crate::error::Result;
use crate::solver::{picard_solve, run, PicardReport, RunOutput, SimState};

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub output: RunOutput,
    pub initial: InitialDataSummary,
    pub paths: Option<OutputPaths>,
}

/// Builds the initial data, runs, and writes outputs when `out_dir` is set.
pub fn run_scenario(s: &Scenario, out_dir: Option<&Path>) -> Result<ScenarioRun> {
    let (u0, v0, initial) = make_initial_data(s)?;
    let output = run(&u0, &v0, &s.run)?;
    let paths = out_dir
        .map(|d| emit_outputs(d, s, &output, initial))
        .transpose()?;
    Ok(ScenarioRun {
        output,
        initial,
        paths,
    })
}

/// Picard iteration of the Duhamel map from the scenario's initial data up
/// to `picard_t`.
pub fn local_existence(s: &Scenario) -> Result<(SimState, PicardReport)> {
    let (u0, v0, _) = make_initial_data(s)?;
    picard_solve(&u0, &v0, &s.picard)
}
