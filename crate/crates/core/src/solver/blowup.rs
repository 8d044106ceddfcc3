use std::fmt;

use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::solver::config::{RunConfig, DEFAULT_SUP_FACTOR};
use crate::solver::state::SimState;
use crate::spectral::SpectralCoeffs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupCriterion {
    SupThreshold,
    TailThreshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupReason {
    pub criterion: BlowupCriterion,
    pub u_l2: f64,
    pub u_inf: f64,
    pub tail_fraction: f64,
}

impl fmt::Display for BlowupReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.criterion {
            BlowupCriterion::SupThreshold => "sup threshold",
            BlowupCriterion::TailThreshold => "tail threshold",
        };
        write!(
            f,
            "{name} (|u|_2 = {:.6e}, |u|_inf = {:.6e}, tail fraction = {:.4})",
            self.u_l2, self.u_inf, self.tail_fraction
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlowupStatus {
    Ok,
    BlownUp(BlowupReason),
}

impl BlowupStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, BlowupStatus::Ok)
    }
}

pub(crate) fn tail_and_sup_check(
    u: &[f64],
    grid: &GridSpec,
    tail_fraction: f64,
    sup_threshold: f64,
    tail_threshold: f64,
) -> BlowupStatus {
    let mut u_inf = 0.0f64;
    let mut sq = 0.0;
    let mut finite = true;
    for &x in u {
        finite &= x.is_finite();
        u_inf = u_inf.max(x.abs());
        sq += x * x;
    }
    let u_l2 = (grid.cell_area() * sq).sqrt();
    let criterion = if !finite || u_inf > sup_threshold {
        Some(BlowupCriterion::SupThreshold)
    } else if !(tail_fraction <= tail_threshold) {
        Some(BlowupCriterion::TailThreshold)
    } else {
        None
    };
    match criterion {
        None => BlowupStatus::Ok,
        Some(criterion) => BlowupStatus::BlownUp(BlowupReason {
            criterion,
            u_l2: if finite { u_l2 } else { f64::INFINITY },
            u_inf: if finite { u_inf } else { f64::INFINITY },
            tail_fraction,
        }),
    }
}

/// Flags a state whose `‖u‖_∞` exceeds the sup threshold or whose spectrum
/// carries more than the tail threshold of its energy in the top third of
/// the band. An unset sup threshold falls back to `1e4·‖u‖_∞` of the state
/// itself, which can only fire on non-finite data.
pub fn blowup_check(state: &SimState, cfg: &RunConfig) -> BlowupStatus {
    let u: &ScalarField = &state.u;
    let sup = cfg
        .blowup_sup_threshold
        .unwrap_or(DEFAULT_SUP_FACTOR * u.sup_abs());
    let tail = if u.is_finite() {
        SpectralCoeffs::from_field(u).tail_fraction()
    } else {
        f64::NAN
    };
    tail_and_sup_check(u.as_slice(), u.grid(), tail, sup, cfg.blowup_tail_threshold)
}
