//! Exponential integrators for the mild formulation
//!
//! ```text
//! u(t+τ) = e^{τΔ} u(t) − ∫₀^τ ∇·e^{(τ−s)Δ}(u∇v)(t+s) ds
//! v(t+τ) = e^{τ(Δ−λ)} v(t) + ∫₀^τ e^{(τ−s)(Δ−λ)} u(t+s) ds
//! ```
//!
//! The linear parts are applied exactly in Fourier space; only the Duhamel
//! integrals are approximated. The flux `∇·(u∇v)` has no zero mode, so the
//! mean of `u` is carried through every step unchanged.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::solver::blowup::{tail_and_sup_check, BlowupStatus};
use crate::solver::config::{RunConfig, Scheme, DEFAULT_SUP_FACTOR};
use crate::solver::state::SimState;
use crate::spectral::{plan, Plan, SpectralCoeffs};

/// `∂_t v = Δv − λv + u`, evaluated spectrally.
pub fn rhs_v(state: &SimState, lambda: f64) -> Result<ScalarField> {
    state.v.check_finite()?;
    state.u.check_finite()?;
    let mut c = SpectralCoeffs::from_field(&state.v);
    c.map_k2(|k2| -(k2 + lambda));
    c.to_field().add(&state.u)
}

/// `φ₁(z)·τ` and `φ₂(z)·τ` for `z = c·τ`, with series near zero.
pub(crate) fn phi12(c: f64, tau: f64) -> (f64, f64, f64) {
    let z = c * tau;
    let e = (-z).exp();
    if z.abs() < 1e-3 {
        let phi1 = 1.0 - z / 2.0 + z * z / 6.0 - z.powi(3) / 24.0 + z.powi(4) / 120.0;
        let phi2 = 0.5 - z / 6.0 + z * z / 24.0 - z.powi(3) / 120.0 + z.powi(4) / 720.0;
        (e, tau * phi1, tau * phi2)
    } else {
        let em1 = (-z).exp_m1();
        (e, -tau * em1 / z, tau * (em1 + z) / (z * z))
    }
}

/// Coupled state in Fourier space, with a cached physical copy of `u`.
#[derive(Clone)]
pub(crate) struct SpecState {
    pub uh: Vec<Complex64>,
    pub vh: Vec<Complex64>,
    u_phys: Option<Vec<f64>>,
}

impl SpecState {
    pub fn from_state(state: &SimState) -> Self {
        let p = plan(state.u.grid());
        Self {
            uh: p.forward(state.u.as_slice()),
            vh: p.forward(state.v.as_slice()),
            u_phys: Some(state.u.as_slice().to_vec()),
        }
    }

    pub fn u_phys(&mut self, p: &Plan) -> &[f64] {
        if self.u_phys.is_none() {
            self.u_phys = Some(p.inverse(&self.uh));
        }
        self.u_phys.as_deref().expect("just filled")
    }
}

struct Coefficients {
    eu: Vec<f64>,
    phi1_u: Vec<f64>,
    phi2_u: Vec<f64>,
    ev: Vec<f64>,
    phi1_v: Vec<f64>,
    phi2_v: Vec<f64>,
}

impl Coefficients {
    fn new(p: &Plan, n: usize, lambda: f64, tau: f64) -> Self {
        let len = p.half() * n;
        let mut c = Self {
            eu: Vec::with_capacity(len),
            phi1_u: Vec::with_capacity(len),
            phi2_u: Vec::with_capacity(len),
            ev: Vec::with_capacity(len),
            phi1_v: Vec::with_capacity(len),
            phi2_v: Vec::with_capacity(len),
        };
        for a in 0..p.half() {
            for b in 0..n {
                let k2 = p.k2(a, b);
                let (e, f1, f2) = phi12(k2, tau);
                c.eu.push(e);
                c.phi1_u.push(f1);
                c.phi2_u.push(f2);
                let (e, f1, f2) = phi12(k2 + lambda, tau);
                c.ev.push(e);
                c.phi1_v.push(f1);
                c.phi2_v.push(f2);
            }
        }
        c
    }
}

/// Spectral `−∇·(u∇v)` from physical `u` and spectral `v̂`.
pub(crate) fn chemotactic_flux(
    p: &Plan,
    grid: &GridSpec,
    u: &[f64],
    vh: &[Complex64],
    dealias: bool,
) -> Vec<Complex64> {
    let n = grid.n();
    let m = p.half();
    let mut dxh = Vec::with_capacity(m * n);
    let mut dyh = Vec::with_capacity(m * n);
    for a in 0..m {
        for b in 0..n {
            let c = vh[a * n + b];
            let ic = Complex64::new(-c.im, c.re);
            dxh.push(ic * p.kx_odd[a]);
            dyh.push(ic * p.ky_odd[b]);
        }
    }
    let mut fx = p.inverse(&dxh);
    let mut fy = p.inverse(&dyh);
    for ((fx, fy), u) in fx.iter_mut().zip(fy.iter_mut()).zip(u) {
        *fx *= u;
        *fy *= u;
    }
    let mut fxh = p.forward(&fx);
    let mut fyh = p.forward(&fy);
    if dealias {
        for a in 0..m {
            for b in 0..n {
                if grid.in_top_third(a, b) {
                    fxh[a * n + b] = Complex64::default();
                    fyh[a * n + b] = Complex64::default();
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..n {
            let i = a * n + b;
            let d = fxh[i] * p.kx_odd[a] + fyh[i] * p.ky_odd[b];
            // −i·d
            fxh[i] = Complex64::new(d.im, -d.re);
        }
    }
    fxh
}

/// Fixed-step exponential integrator bound to one configuration.
pub struct Integrator {
    cfg: RunConfig,
    plan: Arc<Plan>,
    tau: f64,
    coeffs: Coefficients,
}

impl Integrator {
    pub fn new(cfg: &RunConfig, tau: f64) -> Result<Self> {
        cfg.validate()?;
        if !(tau > 0.0 && tau <= cfg.dt * (1.0 + 1e-12)) {
            return Err(Error::InvalidConfig(format!(
                "step {tau} must lie in (0, dt = {}]",
                cfg.dt
            )));
        }
        let plan = plan(&cfg.grid);
        let coeffs = Coefficients::new(&plan, cfg.grid.n(), cfg.lambda, tau);
        Ok(Self {
            cfg: cfg.clone(),
            plan,
            tau,
            coeffs,
        })
    }

    pub fn step_size(&self) -> f64 {
        self.tau
    }

    pub(crate) fn plan(&self) -> &Plan {
        &self.plan
    }

    fn flux(&self, u: &[f64], vh: &[Complex64]) -> Vec<Complex64> {
        if !self.cfg.chemotaxis {
            return vec![Complex64::default(); vh.len()];
        }
        chemotactic_flux(&self.plan, &self.cfg.grid, u, vh, self.cfg.dealias)
    }

    /// Advance the spectral state by one step of size `tau`.
    pub(crate) fn advance(&self, s: &mut SpecState) {
        let c = &self.coeffs;
        let u0 = s.u_phys(&self.plan).to_vec();
        let nu0 = self.flux(&u0, &s.vh);
        let len = s.uh.len();
        let mut au = Vec::with_capacity(len);
        let mut av = Vec::with_capacity(len);
        for i in 0..len {
            au.push(s.uh[i] * c.eu[i] + nu0[i] * c.phi1_u[i]);
            av.push(s.vh[i] * c.ev[i] + s.uh[i] * c.phi1_v[i]);
        }
        match self.cfg.scheme {
            Scheme::Etd1 => {
                s.uh = au;
                s.vh = av;
                s.u_phys = None;
            }
            Scheme::Etd2 => {
                let ua = self.plan.inverse(&au);
                let nua = self.flux(&ua, &av);
                for i in 0..len {
                    let du = au[i] - s.uh[i];
                    au[i] += (nua[i] - nu0[i]) * c.phi2_u[i];
                    av[i] += du * c.phi2_v[i];
                }
                s.uh = au;
                s.vh = av;
                s.u_phys = None;
            }
        }
    }

    pub(crate) fn to_state(&self, s: &mut SpecState, template: &SimState, t: f64) -> SimState {
        let g = self.cfg.grid;
        let u = ScalarField::from_vec_unchecked(g, s.u_phys(&self.plan).to_vec());
        let v = ScalarField::from_vec_unchecked(g, self.plan.inverse(&s.vh));
        template.evolved(t, u, v)
    }
}

/// Negativity audit of a physical `u`: `Some(min)` when `min u < −tol·max u`.
pub(crate) fn negativity_violation(u: &[f64], tol: f64) -> Option<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in u {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo < -tol * hi.max(0.0) {
        Some(lo)
    } else {
        None
    }
}

/// One exponential-integrator step of size `dt ≤ cfg.dt`.
///
/// Fails with [`Error::Blowup`] if the new state trips [`blowup_check`] and
/// with [`Error::ResolutionFailure`] if `u` turns negative beyond the
/// configured tolerance.
///
/// [`blowup_check`]: crate::solver::blowup_check
pub fn duhamel_step(state: &SimState, dt: f64, cfg: &RunConfig) -> Result<SimState> {
    let integ = Integrator::new(cfg, dt)?;
    let mut s = SpecState::from_state(state);
    integ.advance(&mut s);
    let t = state.t + dt;
    let sup_threshold = cfg
        .blowup_sup_threshold
        .unwrap_or(DEFAULT_SUP_FACTOR * state.u.sup_abs());
    let p = integ.plan.clone();
    let tail = SpectralCoeffs::from_raw(cfg.grid, s.uh.clone()).tail_fraction();
    let u = s.u_phys(&p);
    if let BlowupStatus::BlownUp(reason) =
        tail_and_sup_check(u, &cfg.grid, tail, sup_threshold, cfg.blowup_tail_threshold)
    {
        return Err(Error::Blowup {
            t,
            reason: reason.to_string(),
        });
    }
    if let Some(min_u) = negativity_violation(u, cfg.neg_tolerance) {
        return Err(Error::ResolutionFailure {
            t,
            min_u,
            tol: cfg.neg_tolerance,
        });
    }
    Ok(integ.to_state(&mut s, state, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_series_matches_closed_form() {
        for &z in &[1e-4, 5e-4, 9.9e-4, 1.01e-3, 2e-3] {
            let (_, a1, a2) = phi12(z, 1.0);
            let b1 = -(-z).exp_m1() / z;
            let b2 = ((-z).exp_m1() + z) / (z * z);
            assert!((a1 - b1).abs() < 1e-12, "{z}");
            assert!((a2 - b2).abs() < 1e-9, "{z}");
        }
        let (e, f1, f2) = phi12(0.0, 0.5);
        assert_eq!((e, f1, f2), (1.0, 0.5, 0.25));
    }
}
