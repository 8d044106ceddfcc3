use crate::diagnostics::{fill_identity_residuals, DiagnosticsRow};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::solver::blowup::{tail_and_sup_check, BlowupReason, BlowupStatus};
use crate::solver::config::{RunConfig, DEFAULT_SUP_FACTOR};
use crate::solver::state::SimState;
use crate::solver::stepper::{negativity_violation, Integrator, SpecState};
use crate::spectral::SpectralCoeffs;

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Completed,
    /// `t_star` is the midpoint of the last accepted and the failed step.
    Blowup {
        t_star: f64,
        t_fail: f64,
        reason: BlowupReason,
    },
    /// `u` went negative beyond the tolerance before any blowup criterion
    /// fired; the grid no longer resolves the solution.
    ResolutionFailure { t: f64, min_u: f64 },
}

impl RunOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            RunOutcome::Completed => "completed",
            RunOutcome::Blowup { .. } => "blowup",
            RunOutcome::ResolutionFailure { .. } => "resolution_failure",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<SimState>,
    pub rows: Vec<DiagnosticsRow>,
    pub outcome: RunOutcome,
    /// Sup threshold in force, resolved from the initial data if unset.
    pub sup_threshold: f64,
    /// Accepted steps.
    pub steps: usize,
    /// Largest `‖u‖_∞` over all accepted steps.
    pub max_sup: f64,
    /// Last accepted state.
    pub final_state: SimState,
    /// Negativity tolerance in force, relative to `max u`.
    pub neg_tolerance: f64,
}

impl RunOutput {
    /// Turns a non-completed outcome into the matching error.
    pub fn into_result(self) -> Result<Self> {
        match &self.outcome {
            RunOutcome::Completed => Ok(self),
            RunOutcome::Blowup { t_fail, reason, .. } => Err(Error::Blowup {
                t: *t_fail,
                reason: reason.to_string(),
            }),
            RunOutcome::ResolutionFailure { t, min_u } => Err(Error::ResolutionFailure {
                t: *t,
                min_u: *min_u,
                tol: self.neg_tolerance,
            }),
        }
    }
}

fn check_initial_data(u0: &ScalarField, v0: &ScalarField, cfg: &RunConfig) -> Result<SimState> {
    if u0.grid() != &cfg.grid || v0.grid() != &cfg.grid {
        return Err(Error::IncompatibleGrids);
    }
    let state = SimState::new(0.0, u0.clone(), v0.clone())?;
    state.require_nonnegative_data()?;
    let r = cfg.grid.box_length() / 4.0;
    let tail = u0.integrate_where(|x, y| x * x + y * y > r * r);
    if tail > cfg.tail_mass_tolerance {
        return Err(Error::InitialData(format!(
            "mass {tail:e} of u0 beyond |x| = L/4 exceeds {:e}; enlarge the box",
            cfg.tail_mass_tolerance
        )));
    }
    Ok(state)
}

/// Integrates from `(u0, v0)` to `cfg.t_end` or until the blowup detector
/// fires, recording a diagnostics row every `cfg.diag_every` steps and at the
/// final accepted time.
pub fn run(u0: &ScalarField, v0: &ScalarField, cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let init = check_initial_data(u0, v0, cfg)?;
    let sup_threshold = cfg
        .blowup_sup_threshold
        .unwrap_or(DEFAULT_SUP_FACTOR * u0.sup_abs());
    let total = cfg.step_count();
    let full = Integrator::new(cfg, cfg.dt)?;
    let last_tau = cfg.t_end - (total - 1) as f64 * cfg.dt;
    let short = if (last_tau - cfg.dt).abs() > 1e-12 * cfg.dt {
        Some(Integrator::new(cfg, last_tau)?)
    } else {
        None
    };

    let mut rows = vec![DiagnosticsRow::compute(&init, cfg.lambda, &cfg.radii)?];
    let mut snapshots = vec![init.clone()];
    let mut spec = SpecState::from_state(&init);
    let mut current = init.clone();
    let mut max_sup = u0.sup_abs();
    let mut outcome = RunOutcome::Completed;
    let mut steps = 0;

    for k in 1..=total {
        let (integ, t) = match (&short, k == total) {
            (Some(s), true) => (s, cfg.t_end),
            _ => (&full, k as f64 * cfg.dt),
        };
        let before = spec.clone();
        integ.advance(&mut spec);
        let tail = SpectralCoeffs::from_raw(cfg.grid, spec.uh.clone()).tail_fraction();
        let u = spec.u_phys(integ.plan());
        let failure = match tail_and_sup_check(
            u,
            &cfg.grid,
            tail,
            sup_threshold,
            cfg.blowup_tail_threshold,
        ) {
            BlowupStatus::BlownUp(reason) => Some(RunOutcome::Blowup {
                t_star: 0.5 * (current.t + t),
                t_fail: t,
                reason,
            }),
            BlowupStatus::Ok => negativity_violation(u, cfg.neg_tolerance)
                .map(|min_u| RunOutcome::ResolutionFailure { t, min_u }),
        };
        if let Some(failure) = failure {
            outcome = failure;
            spec = before;
            if snapshots.last().map_or(true, |s| s.t < current.t) {
                current = full.to_state(&mut spec, &init, current.t);
                snapshots.push(current.clone());
            }
            break;
        }
        max_sup = max_sup.max(u.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        steps = k;
        let diag = k % cfg.diag_every == 0 || k == total;
        let snap = k == total || (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0);
        if diag || snap {
            current = integ.to_state(&mut spec, &init, t);
            if diag {
                rows.push(DiagnosticsRow::compute(&current, cfg.lambda, &cfg.radii)?);
            }
            if snap {
                snapshots.push(current.clone());
            }
        } else {
            current.t = t;
        }
    }

    fill_identity_residuals(&mut rows, cfg.lambda);
    Ok(RunOutput {
        snapshots,
        rows,
        outcome,
        sup_threshold,
        steps,
        max_sup,
        final_state: current,
        neg_tolerance: cfg.neg_tolerance,
    })
}
