use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiment::scenario::Scenario;
use crate::experiment::{run_scenario, ScenarioRun};
use crate::solver::RunOutcome;

/// Environment variable capping the number of concurrent sweep entries.
pub const WORKERS_ENV: &str = "KS2D_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub label: String,
    pub mass: f64,
    /// `completed`, `blowup`, `resolution_failure` or `error`.
    pub status: String,
    pub t_star: Option<f64>,
    pub final_t: f64,
    pub final_sup: f64,
    pub max_sup: f64,
    pub min_fm: f64,
    /// Largest relative `F_m` identity residual over interior rows.
    pub max_identity_residual: f64,
    pub error: Option<String>,
}

impl SweepEntry {
    fn from_run(label: &str, mass: f64, r: &ScenarioRun) -> Self {
        let rows = &r.output.rows;
        let t_star = match r.output.outcome {
            RunOutcome::Blowup { t_star, .. } => Some(t_star),
            _ => None,
        };
        SweepEntry {
            label: label.to_string(),
            mass,
            status: r.output.outcome.label().to_string(),
            t_star,
            final_t: r.output.final_state.t,
            final_sup: r.output.final_state.u.sup_abs(),
            max_sup: r.output.max_sup,
            min_fm: rows.iter().map(|r| r.fm).fold(f64::INFINITY, f64::min),
            max_identity_residual: rows
                .iter()
                .map(|r| r.fm_identity_residual)
                .filter(|x| x.is_finite())
                .fold(0.0, f64::max),
            error: None,
        }
    }

    fn failed(label: &str, mass: f64, e: &Error) -> Self {
        SweepEntry {
            label: label.to_string(),
            mass,
            status: "error".into(),
            t_star: None,
            final_t: f64::NAN,
            final_sup: f64::NAN,
            max_sup: f64::NAN,
            min_fm: f64::NAN,
            max_identity_residual: f64::NAN,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// One entry per requested mass, in request order.
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    /// Pairs `(lighter, heavier)` of labels where the heavier mass reached a
    /// smaller `max ‖u‖_∞`.
    pub fn sup_monotonicity_violations(&self) -> Vec<(String, String)> {
        let mut sorted: Vec<&SweepEntry> = self.entries.iter().filter(|e| e.max_sup.is_finite()).collect();
        sorted.sort_by(|a, b| a.mass.total_cmp(&b.mass));
        sorted
            .windows(2)
            .filter(|w| w[1].max_sup < w[0].max_sup)
            .map(|w| (w[0].label.clone(), w[1].label.clone()))
            .collect()
    }

    pub fn entry(&self, label: &str) -> Option<&SweepEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "mass_label,mass,status,t_star,final_t,final_sup,max_sup,min_fm,max_identity_residual,error\n",
        );
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.16e}"));
        for e in &self.entries {
            writeln!(
                s,
                "{},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},\"{}\"",
                e.label,
                e.mass,
                e.status,
                opt(e.t_star),
                e.final_t,
                e.final_sup,
                e.max_sup,
                e.min_fm,
                e.max_identity_residual,
                e.error.as_deref().unwrap_or("").replace('"', "'")
            )
            .expect("write to string");
        }
        s
    }
}

/// Worker count from `KS2D_WORKERS`, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `base` once per mass with everything else fixed. A failing entry
/// is recorded and does not stop the others. With `out_dir`, each entry
/// writes into `out_dir/<label>/` and the table goes to `out_dir/sweep.csv`.
pub fn sweep_mass(
    base: &Scenario,
    masses: &[(String, f64)],
    out_dir: Option<&Path>,
    workers: usize,
) -> Result<SweepResult> {
    if masses.is_empty() {
        return Err(Error::config("masses", "no masses given"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let entries = pool.install(|| {
        masses
            .par_iter()
            .map(|(label, m)| {
                let s = base.with_mass(label, *m);
                let dir = out_dir.map(|d| d.join(label));
                match run_scenario(&s, dir.as_deref()) {
                    Ok(r) => SweepEntry::from_run(label, *m, &r),
                    Err(e) => SweepEntry::failed(label, *m, &e),
                }
            })
            .collect::<Vec<_>>()
    });
    let result = SweepResult { entries };
    if let Some(d) = out_dir {
        std::fs::write(d.join("sweep.csv"), result.to_csv())?;
    }
    Ok(result)
}
