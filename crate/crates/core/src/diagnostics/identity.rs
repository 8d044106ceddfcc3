//! The `F_m` dissipation identity
//! `dF_m/dt + D̃ = −∫∂_t v·u/(1+u) − ∫u/(1+u) + λ∫v/(1+u)`
//! checked on recorded rows, and the monotonicity it implies.

use crate::diagnostics::row::DiagnosticsRow;
use crate::error::{Error, Result};

pub(crate) fn check_equal_spacing(t0: f64, t1: f64, t2: f64) -> Result<()> {
    let (a, b) = (t1 - t0, t2 - t1);
    if !(a > 0.0 && b > 0.0) || (a - b).abs() > 1e-9 * (t2 - t0) {
        return Err(Error::InvalidConfig(format!(
            "rows at t = {t0}, {t1}, {t2} are not equally spaced"
        )));
    }
    Ok(())
}

fn relative(dfdt: f64, row: &DiagnosticsRow, lambda: f64) -> f64 {
    let rhs = row.rhs.total(lambda);
    (dfdt + row.d_tilde - rhs).abs() / (row.d_tilde.abs() + rhs.abs() + 1e-30)
}

/// `|dF_m/dt + D̃ − RHS| / (|D̃| + |RHS| + 1e−30)` at the middle of three
/// equally spaced rows, with a centred difference for `dF_m/dt`.
pub fn fm_identity_residual(window: &[DiagnosticsRow], lambda: f64) -> Result<f64> {
    if window.len() < 3 {
        return Err(Error::InsufficientRows {
            needed: 3,
            got: window.len(),
        });
    }
    let (a, b, c) = (&window[0], &window[1], &window[2]);
    check_equal_spacing(a.t, b.t, c.t)?;
    Ok(relative((c.fm - a.fm) / (c.t - a.t), b, lambda))
}

/// Derivative at `ts[at]` of the quadratic through three points.
fn three_point(ts: [f64; 3], fs: [f64; 3], at: usize) -> f64 {
    let x = ts[at];
    let mut d = 0.0;
    for j in 0..3 {
        let mut num = 0.0;
        let mut den = 1.0;
        for m in 0..3 {
            if m == j {
                continue;
            }
            den *= ts[j] - ts[m];
            let mut prod = 1.0;
            for l in 0..3 {
                if l != j && l != m {
                    prod *= x - ts[l];
                }
            }
            num += prod;
        }
        d += fs[j] * num / den;
    }
    d
}

/// `dF_m/dt` at every row from the quadratic through it and its neighbours
/// (one-sided at the ends). Needs at least three rows.
pub fn fm_time_derivative(rows: &[DiagnosticsRow]) -> Vec<f64> {
    let n = rows.len();
    if n < 3 {
        return vec![f64::NAN; n];
    }
    (0..n)
        .map(|k| {
            let s = k.saturating_sub(1).min(n - 3);
            let ts = [rows[s].t, rows[s + 1].t, rows[s + 2].t];
            let fs = [rows[s].fm, rows[s + 1].fm, rows[s + 2].fm];
            three_point(ts, fs, k - s)
        })
        .collect()
}

/// Fills `fm_identity_residual` in every row.
pub fn fill_identity_residuals(rows: &mut [DiagnosticsRow], lambda: f64) {
    let d = fm_time_derivative(rows);
    for (row, d) in rows.iter_mut().zip(d) {
        row.fm_identity_residual = if d.is_nan() {
            f64::NAN
        } else {
            relative(d, row, lambda)
        };
    }
}

/// `|dF_m/dt + D̃ − RHS|` at every row, in units of `F_m` per time; `NaN`
/// with fewer than three rows.
pub fn identity_residuals_abs(rows: &[DiagnosticsRow], lambda: f64) -> Vec<f64> {
    fm_time_derivative(rows)
        .iter()
        .zip(rows)
        .map(|(d, r)| (d + r.d_tilde - r.rhs.total(lambda)).abs())
        .collect()
}

/// Largest [`identity_residuals_abs`] entry.
pub fn identity_residual_scale(rows: &[DiagnosticsRow], lambda: f64) -> f64 {
    identity_residuals_abs(rows, lambda)
        .into_iter()
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub index: usize,
    pub t: f64,
    /// Amount by which the step exceeded its allowance.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub lambda: f64,
    /// Largest absolute identity residual over the rows.
    pub residual_scale: f64,
    /// Slope bound `max(1, λ)‖v₀‖₁ + ‖u₀‖₁` when `λ > 0`.
    pub slope_bound: Option<f64>,
    pub violations: Vec<MonotonicityViolation>,
    pub max_violation: f64,
    pub min_fm: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `λ = 0` checks `F_m(t_{k+1}) ≤ F_m(t_k) + slack`; for `λ > 0` checks
/// that every slope stays below `max(1, λ)‖v₀‖₁ + ‖u₀‖₁` plus the same slack
/// per unit time. The slack on `[t_k, t_{k+1}]` is ten times the larger
/// absolute identity residual at its two rows, times `t_{k+1} − t_k`.
///
/// The residuals are the ones recorded in `fm_identity_residual` when the
/// run finished, so editing `fm` afterwards does not move the allowance.
/// Rows without a recorded value fall back to [`identity_residuals_abs`].
/// `‖u₀‖₁, ‖v₀‖₁` are read from the first row.
pub fn fm_monotonicity_check(rows: &[DiagnosticsRow], lambda: f64) -> MonotonicityReport {
    let fresh = identity_residuals_abs(rows, lambda);
    let res: Vec<f64> = rows
        .iter()
        .zip(fresh)
        .map(|(r, f)| {
            let recorded = r.fm_identity_residual
                * (r.d_tilde.abs() + r.rhs.total(lambda).abs() + 1e-30);
            if recorded.is_finite() {
                recorded
            } else if f.is_finite() {
                f
            } else {
                0.0
            }
        })
        .collect();
    let scale = res.iter().copied().fold(0.0, f64::max);
    let slope_bound = (lambda > 0.0).then(|| {
        let r0 = &rows[0];
        lambda.max(1.0) * r0.int_v.abs() + r0.mass_u.abs()
    });
    let mut violations = Vec::new();
    let mut max_violation = 0.0f64;
    for (k, w) in rows.windows(2).enumerate() {
        let dt = w[1].t - w[0].t;
        let slack = 10.0 * res[k].max(res[k + 1]) * dt;
        let excess = match slope_bound {
            None => w[1].fm - w[0].fm - slack,
            Some(b) => (w[1].fm - w[0].fm) - (b * dt + slack),
        };
        if excess > 0.0 {
            max_violation = max_violation.max(excess);
            violations.push(MonotonicityViolation {
                index: k + 1,
                t: w[1].t,
                excess,
            });
        }
    }
    MonotonicityReport {
        lambda,
        residual_scale: scale,
        slope_bound,
        violations,
        max_violation,
        min_fm: rows.iter().map(|r| r.fm).fold(f64::INFINITY, f64::min),
    }
}
