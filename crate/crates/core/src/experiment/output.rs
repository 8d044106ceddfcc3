use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::diagnostics::{write_csv, DiagnosticsRow};
use crate::error::{Error, Result};
use crate::experiment::scenario::{InitialDataSummary, Scenario};
use crate::snapshot::write_snapshot;
use crate::solver::{BlowupCriterion, RunOutcome, RunOutput};

/// Files written by [`emit_outputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub diagnostics: PathBuf,
    pub manifest: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub slices: Vec<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub status: String,
    pub t_star: Option<f64>,
    pub t_fail: Option<f64>,
    pub criterion: Option<String>,
    pub reason: Option<String>,
    pub final_t: f64,
    pub steps: usize,
    pub max_sup: f64,
    pub sup_threshold: f64,
    pub tail_threshold: f64,
    pub mass: f64,
    pub initial_data: InitialDataSummary,
    pub config: std::collections::BTreeMap<String, String>,
    pub run_config: crate::solver::RunConfig,
    pub version: String,
    pub seed: u64,
    pub timestamp: u64,
}

impl Manifest {
    pub fn new(s: &Scenario, out: &RunOutput, init: InitialDataSummary) -> Self {
        let (t_star, t_fail, criterion, reason) = match &out.outcome {
            RunOutcome::Completed => (None, None, None, None),
            RunOutcome::Blowup {
                t_star,
                t_fail,
                reason,
            } => (
                Some(*t_star),
                Some(*t_fail),
                Some(
                    match reason.criterion {
                        BlowupCriterion::SupThreshold => "sup_threshold",
                        BlowupCriterion::TailThreshold => "tail_threshold",
                    }
                    .to_string(),
                ),
                Some(reason.to_string()),
            ),
            RunOutcome::ResolutionFailure { t, min_u } => (
                None,
                Some(*t),
                Some("negativity".to_string()),
                Some(format!("min(u) = {min_u:e}")),
            ),
        };
        Manifest {
            name: s.name.clone(),
            status: out.outcome.label().to_string(),
            t_star,
            t_fail,
            criterion,
            reason,
            final_t: out.final_state.t,
            steps: out.steps,
            max_sup: out.max_sup,
            sup_threshold: out.sup_threshold,
            tail_threshold: s.run.blowup_tail_threshold,
            mass: s.mass,
            initial_data: init,
            config: s.raw.clone(),
            run_config: s.run.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: s.seed,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Unwritable {
        path: dir.to_path_buf(),
        source,
    })?;
    // create_dir_all succeeds on an existing read-only directory
    let probe = dir.join(".ks2d-write-probe");
    std::fs::write(&probe, b"").map_err(|source| Error::Unwritable {
        path: dir.to_path_buf(),
        source,
    })?;
    std::fs::remove_file(probe)?;
    Ok(())
}

fn slice(path: &Path, column: &str, rows: &[DiagnosticsRow], f: impl Fn(&DiagnosticsRow) -> f64) -> Result<()> {
    let mut s = format!("t,{column}\n");
    for r in rows {
        writeln!(s, "{:.16e},{:.16e}", r.t, f(r)).expect("write to string");
    }
    std::fs::write(path, s)?;
    Ok(())
}

/// Writes `diagnostics.csv`, `u_XXXX.ks2d`/`v_XXXX.ks2d` snapshots,
/// `manifest.json` and the plot slices `fm.csv`, `mass.csv`, `sup.csv`.
pub fn emit_outputs(
    out_dir: &Path,
    scenario: &Scenario,
    out: &RunOutput,
    init: InitialDataSummary,
) -> Result<OutputPaths> {
    create_dir(out_dir)?;
    let diagnostics = out_dir.join("diagnostics.csv");
    write_csv(&diagnostics, &out.rows)?;

    let mut snapshots = Vec::new();
    for (k, st) in out.snapshots.iter().enumerate() {
        for (name, f) in [("u", &st.u), ("v", &st.v)] {
            let p = out_dir.join(format!("{name}_{k:04}.ks2d"));
            write_snapshot(&p, f, st.t)?;
            snapshots.push(p);
        }
    }

    let slices = vec![
        out_dir.join("fm.csv"),
        out_dir.join("mass.csv"),
        out_dir.join("sup.csv"),
    ];
    slice(&slices[0], "F_m", &out.rows, |r| r.fm)?;
    slice(&slices[1], "mass_u", &out.rows, |r| r.mass_u)?;
    slice(&slices[2], "u_linf", &out.rows, |r| r.u_linf)?;

    let manifest = out_dir.join("manifest.json");
    let m = Manifest::new(scenario, out, init);
    let json = serde_json::to_string_pretty(&m).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    std::fs::write(&manifest, json)?;

    Ok(OutputPaths {
        dir: out_dir.to_path_buf(),
        diagnostics,
        manifest,
        snapshots,
        slices,
    })
}
