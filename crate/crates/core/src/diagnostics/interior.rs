//! Functionals localized near the origin by `ψ_R²`.

use crate::diagnostics::cutoff::CutoffSpec;
use crate::diagnostics::exterior::check_small_radius;
use crate::diagnostics::functionals::xlogx;
use crate::error::{Error, Result};
use crate::solver::{rhs_v, SimState};
use crate::spectral::gradient;

fn weighted(values: impl Iterator<Item = f64>, psi: &CutoffSpec) -> f64 {
    let s: f64 = values
        .zip(psi.profile.as_slice())
        .map(|(f, &p)| f * p * p)
        .sum();
    psi.profile.grid().cell_area() * s
}

/// `L_R = ∫u(ln u − 1)ψ_R² − ∫uvψ_R² + ½∫|∇v|²ψ_R² + (λ/2)∫v²ψ_R²`.
pub fn interior_lyapunov_lr(state: &SimState, radius: f64, lambda: f64) -> Result<f64> {
    let grid = *state.u.grid();
    check_small_radius(&grid, radius)?;
    let psi = CutoffSpec::interior(grid, radius);
    let (vx, vy) = gradient(&state.v)?;
    Ok(lr_with(state, lambda, &psi, (&vx, &vy)))
}

pub(crate) fn lr_with(
    state: &SimState,
    lambda: f64,
    psi: &CutoffSpec,
    grad_v: (&crate::field::ScalarField, &crate::field::ScalarField),
) -> f64 {
    let u = state.u.as_slice();
    let v = state.v.as_slice();
    let (gx, gy) = (grad_v.0.as_slice(), grad_v.1.as_slice());
    weighted(
        (0..u.len()).map(|i| {
            let up = u[i].max(0.0);
            xlogx(up) - up - u[i] * v[i]
                + 0.5 * (gx[i] * gx[i] + gy[i] * gy[i])
                + 0.5 * lambda * v[i] * v[i]
        }),
        psi,
    )
}

/// `∫(u ln u)ψ_R²`.
pub fn interior_entropy(state: &SimState, radius: f64) -> Result<f64> {
    let grid = *state.u.grid();
    check_small_radius(&grid, radius)?;
    let psi = CutoffSpec::interior(grid, radius);
    Ok(entropy_with(state, &psi))
}

pub(crate) fn entropy_with(state: &SimState, psi: &CutoffSpec) -> f64 {
    weighted(state.u.as_slice().iter().map(|&u| xlogx(u)), psi)
}

/// Both sides of the localized dissipation identity
/// `dL_R/dt + dissipation = boundary` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorBalance {
    pub lr: f64,
    /// `∫u|∇(ln u − v)|²ψ_R² + ∫|∂_t v|²ψ_R²`
    pub dissipation: f64,
    /// `−∫u(ln u − v)∇(ln u − v)·∇ψ_R² − ∫∂_t v ∇v·∇ψ_R²`
    pub boundary: f64,
}

/// Evaluates [`InteriorBalance`]. `u∇ln u` is formed as `∇u`, so only the
/// cells where `ψ_R > 0` need `u > 0`.
pub fn interior_balance(state: &SimState, radius: f64, lambda: f64) -> Result<InteriorBalance> {
    let grid = *state.u.grid();
    check_small_radius(&grid, radius)?;
    let psi = CutoffSpec::interior(grid, radius);
    let (ux, uy) = gradient(&state.u)?;
    let (vx, vy) = gradient(&state.v)?;
    let dtv = rhs_v(state, lambda)?;
    let (px, py) = psi.gradient_of_square();
    let u = state.u.as_slice();
    let v = state.v.as_slice();
    let p = psi.profile.as_slice();
    let (mut dis, mut bnd) = (0.0, 0.0);
    for i in 0..u.len() {
        if p[i] == 0.0 {
            continue;
        }
        let d = dtv.as_slice()[i];
        let (gvx, gvy) = (vx.as_slice()[i], vy.as_slice()[i]);
        let (dpx, dpy) = (px.as_slice()[i], py.as_slice()[i]);
        dis += d * d * p[i] * p[i];
        bnd -= d * (gvx * dpx + gvy * dpy);
        if u[i] <= 0.0 {
            continue;
        }
        // u∇(ln u − v) = ∇u − u∇v
        let fx = ux.as_slice()[i] - u[i] * gvx;
        let fy = uy.as_slice()[i] - u[i] * gvy;
        dis += (fx * fx + fy * fy) / u[i] * p[i] * p[i];
        bnd -= (u[i].ln() - v[i]) * (fx * dpx + fy * dpy);
    }
    let h2 = grid.cell_area();
    Ok(InteriorBalance {
        lr: lr_with(state, lambda, &psi, (&vx, &vy)),
        dissipation: h2 * dis,
        boundary: h2 * bnd,
    })
}

/// Relative residual of the localized identity on three equally spaced
/// states, with `dL_R/dt` from the centred difference.
pub fn interior_identity_residual(window: &[SimState], radius: f64, lambda: f64) -> Result<f64> {
    if window.len() < 3 {
        return Err(Error::InsufficientRows {
            needed: 3,
            got: window.len(),
        });
    }
    let (a, b, c) = (&window[0], &window[1], &window[2]);
    crate::diagnostics::identity::check_equal_spacing(a.t, b.t, c.t)?;
    let la = interior_lyapunov_lr(a, radius, lambda)?;
    let lc = interior_lyapunov_lr(c, radius, lambda)?;
    let mid = interior_balance(b, radius, lambda)?;
    let dl = (lc - la) / (c.t - a.t);
    Ok((dl + mid.dissipation - mid.boundary).abs()
        / (mid.dissipation.abs() + mid.boundary.abs() + 1e-30))
}
