//! Lyapunov functionals and the dissipation of the reconstructed functional.
//!
//! Wherever `u ln u` or `ln(1+u)` appears, `u` is replaced by `max(u, 0)`
//! with `0·ln 0 = 0`; the clipped mass is reported separately by
//! [`ScalarField::negative_mass`].

use crate::error::Result;
use crate::field::ScalarField;
use crate::solver::{rhs_v, SimState};
use crate::spectral::gradient;

pub(crate) fn xlogx(u: f64) -> f64 {
    if u > 0.0 {
        u * u.ln()
    } else {
        0.0
    }
}

pub(crate) fn mod_entropy_density(u: f64) -> f64 {
    let u = u.max(0.0);
    (1.0 + u) * u.ln_1p()
}

fn integrate_map(f: &ScalarField, g: impl Fn(f64) -> f64) -> f64 {
    f.grid().cell_area() * f.as_slice().iter().map(|&x| g(x)).sum::<f64>()
}

/// `−∫uv + ½‖∇v‖² + (λ/2)‖v‖²`, shared by every functional.
fn v_terms(state: &SimState, lambda: f64) -> Result<f64> {
    let (vx, vy) = gradient(&state.v)?;
    let uv = state.u.inner(&state.v)?;
    let grad2 = vx.l2_raw().powi(2) + vy.l2_raw().powi(2);
    Ok(-uv + 0.5 * grad2 + 0.5 * lambda * state.v.l2_raw().powi(2))
}

/// `L = ∫u ln u − ∫uv + ½‖∇v‖₂² + (λ/2)‖v‖₂²`.
pub fn lyapunov_l(state: &SimState, lambda: f64) -> Result<f64> {
    Ok(integrate_map(&state.u, xlogx) + v_terms(state, lambda)?)
}

/// `L_m`, with the modified entropy `∫(1+u)ln(1+u)` in place of `∫u ln u`.
pub fn lyapunov_lm(state: &SimState, lambda: f64) -> Result<f64> {
    Ok(integrate_map(&state.u, mod_entropy_density) + v_terms(state, lambda)?)
}

/// `F_m = L_m + ∫ln(1+u) − ∫v`.
pub fn functional_fm(state: &SimState, lambda: f64) -> Result<f64> {
    let lm = lyapunov_lm(state, lambda)?;
    Ok(lm + integrate_map(&state.u, |u| u.max(0.0).ln_1p()) - state.v.integrate_raw())
}

/// `D̃ = ∫u|∇(ln(1+u) − v)|² + ‖∂_t v‖₂²` with `∂_t v` from [`rhs_v`].
pub fn dissipation_dtilde(state: &SimState, lambda: f64) -> Result<f64> {
    let w = state.u.map(|u| u.max(0.0).ln_1p()).sub(&state.v)?;
    let (wx, wy) = gradient(&w)?;
    let dtv = rhs_v(state, lambda)?;
    Ok(weighted_grad2(&state.u, &wx, &wy) + dtv.l2_raw().powi(2))
}

fn weighted_grad2(u: &ScalarField, gx: &ScalarField, gy: &ScalarField) -> f64 {
    let s: f64 = u
        .as_slice()
        .iter()
        .zip(gx.as_slice().iter().zip(gy.as_slice()))
        .map(|(&u, (&a, &b))| u.max(0.0) * (a * a + b * b))
        .sum();
    u.grid().cell_area() * s
}

/// The three integrals on the right of the `F_m` dissipation identity,
/// `dF_m/dt + D̃ = dtv + frac + λ·v_over`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmRhs {
    /// `−∫∂_t v · u/(1+u)`
    pub dtv: f64,
    /// `−∫u/(1+u)`
    pub frac: f64,
    /// `∫v/(1+u)`
    pub v_over: f64,
}

impl FmRhs {
    pub fn total(&self, lambda: f64) -> f64 {
        self.dtv + self.frac + lambda * self.v_over
    }
}

pub fn fm_rhs(state: &SimState, lambda: f64) -> Result<FmRhs> {
    let dtv = rhs_v(state, lambda)?;
    Ok(fm_rhs_with(&state.u, &state.v, &dtv))
}

pub(crate) fn fm_rhs_with(u: &ScalarField, v: &ScalarField, dtv: &ScalarField) -> FmRhs {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for ((&u, &v), &d) in u.as_slice().iter().zip(v.as_slice()).zip(dtv.as_slice()) {
        let u = u.max(0.0);
        let r = 1.0 / (1.0 + u);
        a -= d * u * r;
        b -= u * r;
        c += v * r;
    }
    let h2 = u.grid().cell_area();
    FmRhs {
        dtv: h2 * a,
        frac: h2 * b,
        v_over: h2 * c,
    }
}

/// Every functional of one state, computed with shared transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Functionals {
    pub grad_v_l2: f64,
    pub entropy: f64,
    pub entropy_mod: f64,
    pub entropy_int: f64,
    pub l: f64,
    pub lm: f64,
    pub fm: f64,
    pub d_tilde: f64,
    pub rhs: FmRhs,
}

pub(crate) fn functionals(
    state: &SimState,
    lambda: f64,
    grad_v: &(ScalarField, ScalarField),
    dtv: &ScalarField,
) -> Result<Functionals> {
    let (u, v) = (&state.u, &state.v);
    let grad_v_l2 = (grad_v.0.l2_raw().powi(2) + grad_v.1.l2_raw().powi(2)).sqrt();
    let vt = -u.inner(v)? + 0.5 * grad_v_l2 * grad_v_l2 + 0.5 * lambda * v.l2_raw().powi(2);
    let entropy = integrate_map(u, xlogx);
    let entropy_mod = integrate_map(u, mod_entropy_density);
    let log1p = u.map(|u| u.max(0.0).ln_1p());
    let entropy_int = log1p.integrate_raw();
    let lm = entropy_mod + vt;
    let (lx, ly) = gradient(&log1p)?;
    let wx = lx.sub(&grad_v.0)?;
    let wy = ly.sub(&grad_v.1)?;
    Ok(Functionals {
        grad_v_l2,
        entropy,
        entropy_mod,
        entropy_int,
        l: entropy + vt,
        lm,
        fm: lm + entropy_int - v.integrate_raw(),
        d_tilde: weighted_grad2(u, &wx, &wy) + dtv.l2_raw().powi(2),
        rhs: fm_rhs_with(u, v, dtv),
    })
}
