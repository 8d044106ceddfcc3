//! Picard iteration of the Duhamel map
//!
//! ```text
//! Φ₁[u,v](t) = e^{tΔ}u₀ − ∫₀^t ∇·e^{(t−s)Δ}(u∇v)(s) ds
//! Φ₂[u,v](t) = e^{t(Δ−λ)}v₀ + ∫₀^t e^{(t−s)(Δ−λ)}u(s) ds
//! ```
//!
//! on a log-spaced set of time nodes, with distances measured in the
//! weighted metric
//! `d(a, b) = sup t^{1−1/p}‖u_a − u_b‖_p + sup t^{1/2−1/q}‖∇(v_a − v_b)‖_q`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::solver::state::SimState;
use crate::solver::stepper::{chemotactic_flux, phi12};
use crate::spectral::{plan, Plan, SpectralCoeffs};

#[derive(Debug, Clone, PartialEq)]
pub struct PicardConfig {
    /// Exponent in `(4/3, 2)`; the conjugate is `q = p/(p−1)`.
    pub p: f64,
    /// Horizon `T`.
    pub horizon: f64,
    pub max_iter: usize,
    /// Absolute tolerance on the weighted distance between iterates.
    pub tol: f64,
    /// Number of log-spaced nodes in `(0, T]`.
    pub nodes: usize,
    /// Ratio between the first and the last node.
    pub first_node_ratio: f64,
    pub lambda: f64,
    pub chemotaxis: bool,
}

impl PicardConfig {
    pub fn new(horizon: f64) -> Self {
        Self {
            p: 1.5,
            horizon,
            max_iter: 50,
            tol: 1e-12,
            nodes: 64,
            first_node_ratio: 1e-3,
            lambda: 0.0,
            chemotaxis: true,
        }
    }

    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 4.0 / 3.0 && self.p < 2.0) {
            return Err(Error::InvalidExponent(self.p));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::config("picard_t", "horizon must be > 0"));
        }
        if self.nodes < 2 {
            return Err(Error::config("picard_nodes", "need at least 2 nodes"));
        }
        if !(self.first_node_ratio > 0.0 && self.first_node_ratio < 1.0) {
            return Err(Error::config("first_node_ratio", "must lie in (0, 1)"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::config("picard_tol", "must be > 0"));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::config("lambda", "must be >= 0"));
        }
        Ok(())
    }

    /// `0` followed by the log-spaced nodes `T·r^{(N−1−j)/(N−1)}`.
    pub fn node_times(&self) -> Vec<f64> {
        let mut t = vec![0.0];
        t.extend(log_spaced(self.horizon, self.nodes, self.first_node_ratio));
        t
    }
}

/// `count` log-spaced times from `t_max·ratio` to `t_max`.
pub fn log_spaced(t_max: f64, count: usize, ratio: f64) -> Vec<f64> {
    if count == 1 {
        return vec![t_max];
    }
    let l = ratio.ln();
    (0..count)
        .map(|j| {
            if j + 1 == count {
                t_max
            } else {
                t_max * (l * (1.0 - j as f64 / (count - 1) as f64)).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardReport {
    pub p: f64,
    pub q: f64,
    pub horizon: f64,
    /// `d_k = d(Φ^k, Φ^{k−1})` for `k = 1, 2, …`.
    pub distances: Vec<f64>,
    /// `d_{k+1}/d_k`.
    pub ratios: Vec<f64>,
    /// Smallest `k` with `d_{k+1} < tol`, if reached.
    pub converged_after: Option<usize>,
    /// `sup t^{1−1/p}‖u‖_p` of the final iterate.
    pub weighted_u: f64,
    /// `sup t^{1/2−1/q}‖∇v‖_q` of the final iterate.
    pub weighted_grad_v: f64,
}

impl PicardReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

/// Time-ordered states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<SimState>,
}

impl Trajectory {
    pub fn new(states: Vec<SimState>) -> Self {
        Self { states }
    }

    /// State recorded at `t` to within `1e−9` relative.
    pub fn at(&self, t: f64) -> Result<&SimState> {
        self.states
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-9 * t.abs().max(1e-300))
            .ok_or(Error::UncoveredSample(t))
    }
}

fn weights(p: f64, t: f64) -> (f64, f64) {
    let q = p / (p - 1.0);
    (t.powf(1.0 - 1.0 / p), t.powf(0.5 - 1.0 / q))
}

fn grad_lq(p: &Plan, grid: &GridSpec, vh: &[Complex64], q: f64) -> f64 {
    let c = SpectralCoeffs::from_raw(*grid, vh.to_vec());
    let (dx, dy) = c.derivatives();
    let gx = p.inverse(dx.data());
    let gy = p.inverse(dy.data());
    let s: f64 = gx
        .iter()
        .zip(&gy)
        .map(|(a, b)| (a * a + b * b).sqrt().powf(q))
        .sum();
    (grid.cell_area() * s).powf(1.0 / q)
}

fn lp(grid: &GridSpec, f: &[f64], p: f64) -> f64 {
    let s: f64 = f.iter().map(|x| x.abs().powf(p)).sum();
    (grid.cell_area() * s).powf(1.0 / p)
}

/// `(sup t^{1−1/p}‖u(t)‖_p, sup t^{1/2−1/q}‖∇v(t)‖_q)` over `sample_times`,
/// each of which must be a recorded time of the trajectory.
pub fn weighted_xt_norms(traj: &Trajectory, p: f64, sample_times: &[f64]) -> Result<(f64, f64)> {
    if traj.states.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if !(p > 4.0 / 3.0 && p < 2.0) {
        return Err(Error::InvalidExponent(p));
    }
    let q = p / (p - 1.0);
    let (mut a, mut b) = (0.0f64, 0.0f64);
    for &t in sample_times {
        let s = traj.at(t)?;
        let grid = *s.u.grid();
        let pl = plan(&grid);
        let (wu, wv) = weights(p, t);
        a = a.max(wu * s.u.lp_raw(p));
        b = b.max(wv * grad_lq(&pl, &grid, &pl.forward(s.v.as_slice()), q));
    }
    Ok((a, b))
}

struct Iterate {
    uh: Vec<Vec<Complex64>>,
    vh: Vec<Vec<Complex64>>,
    u: Vec<Vec<f64>>,
}

struct Harness<'a> {
    cfg: &'a PicardConfig,
    grid: GridSpec,
    plan: std::sync::Arc<Plan>,
    times: Vec<f64>,
    u0h: Vec<Complex64>,
    v0h: Vec<Complex64>,
}

impl<'a> Harness<'a> {
    fn new(u0: &ScalarField, v0: &ScalarField, cfg: &'a PicardConfig) -> Result<Self> {
        cfg.validate()?;
        u0.grid().check_same(v0.grid())?;
        u0.check_finite()?;
        v0.check_finite()?;
        let grid = *u0.grid();
        let plan = plan(&grid);
        Ok(Self {
            cfg,
            grid,
            times: cfg.node_times(),
            u0h: plan.forward(u0.as_slice()),
            v0h: plan.forward(v0.as_slice()),
            plan,
        })
    }

    fn k2(&self, i: usize) -> f64 {
        let n = self.grid.n();
        self.plan.k2(i / n, i % n)
    }

    fn seed(&self) -> Iterate {
        let mut it = Iterate {
            uh: Vec::new(),
            vh: Vec::new(),
            u: Vec::new(),
        };
        for &t in &self.times {
            let uh: Vec<Complex64> = (0..self.u0h.len())
                .map(|i| self.u0h[i] * (-t * self.k2(i)).exp())
                .collect();
            let vh = (0..self.v0h.len())
                .map(|i| self.v0h[i] * (-t * (self.k2(i) + self.cfg.lambda)).exp())
                .collect();
            it.u.push(self.plan.inverse(&uh));
            it.uh.push(uh);
            it.vh.push(vh);
        }
        it
    }

    /// One application of `Φ`. The Duhamel integrals use the exact kernel
    /// against the piecewise-linear interpolant of the integrand in time.
    fn apply(&self, prev: &Iterate) -> Iterate {
        let len = self.u0h.len();
        let nonlin: Vec<Vec<Complex64>> = (0..self.times.len())
            .map(|j| {
                if self.cfg.chemotaxis {
                    chemotactic_flux(&self.plan, &self.grid, &prev.u[j], &prev.vh[j], false)
                } else {
                    vec![Complex64::default(); len]
                }
            })
            .collect();
        let mut iu = vec![Complex64::default(); len];
        let mut iv = vec![Complex64::default(); len];
        let mut out = Iterate {
            uh: Vec::with_capacity(self.times.len()),
            vh: Vec::with_capacity(self.times.len()),
            u: Vec::with_capacity(self.times.len()),
        };
        for (j, &t) in self.times.iter().enumerate() {
            if j > 0 {
                let h = t - self.times[j - 1];
                for i in 0..len {
                    let k2 = self.k2(i);
                    let (e, f1, f2) = phi12(k2, h);
                    iu[i] = iu[i] * e + nonlin[j - 1][i] * (f1 - f2) + nonlin[j][i] * f2;
                    let (e, f1, f2) = phi12(k2 + self.cfg.lambda, h);
                    iv[i] = iv[i] * e + prev.uh[j - 1][i] * (f1 - f2) + prev.uh[j][i] * f2;
                }
            }
            let uh: Vec<Complex64> = (0..len)
                .map(|i| self.u0h[i] * (-t * self.k2(i)).exp() + iu[i])
                .collect();
            let vh: Vec<Complex64> = (0..len)
                .map(|i| {
                    self.v0h[i] * (-t * (self.k2(i) + self.cfg.lambda)).exp() + iv[i]
                })
                .collect();
            out.u.push(self.plan.inverse(&uh));
            out.uh.push(uh);
            out.vh.push(vh);
        }
        out
    }

    fn distance(&self, a: &Iterate, b: &Iterate) -> f64 {
        let (p, q) = (self.cfg.p, self.cfg.q());
        let (mut du, mut dv) = (0.0f64, 0.0f64);
        for (j, &t) in self.times.iter().enumerate().skip(1) {
            let (wu, wv) = weights(p, t);
            let diff: Vec<f64> = a.u[j].iter().zip(&b.u[j]).map(|(x, y)| x - y).collect();
            du = du.max(wu * lp(&self.grid, &diff, p));
            let dvh: Vec<Complex64> = a.vh[j].iter().zip(&b.vh[j]).map(|(x, y)| x - y).collect();
            dv = dv.max(wv * grad_lq(&self.plan, &self.grid, &dvh, q));
        }
        du + dv
    }

    fn solve(&self) -> Result<(Iterate, PicardReport)> {
        let mut cur = self.seed();
        let mut distances = Vec::new();
        let mut ratios = Vec::new();
        let mut converged_after = None;
        let mut above_one = 0;
        for k in 1..=self.cfg.max_iter.max(1) {
            let next = self.apply(&cur);
            let d = self.distance(&next, &cur);
            if !d.is_finite() {
                return Err(Error::NonFinite);
            }
            if let Some(&last) = distances.last() {
                let r = if last > 0.0 { d / last } else { 0.0 };
                ratios.push(r);
                above_one = if r > 1.0 { above_one + 1 } else { 0 };
            }
            distances.push(d);
            cur = next;
            if d < self.cfg.tol {
                converged_after = Some(k - 1);
                break;
            }
            if above_one >= 3 {
                return Err(Error::NoContraction {
                    horizon: self.cfg.horizon,
                    ratios,
                });
            }
        }
        let (p, q) = (self.cfg.p, self.cfg.q());
        let (mut wu_max, mut wv_max) = (0.0f64, 0.0f64);
        for (j, &t) in self.times.iter().enumerate().skip(1) {
            let (wu, wv) = weights(p, t);
            wu_max = wu_max.max(wu * lp(&self.grid, &cur.u[j], p));
            wv_max = wv_max.max(wv * grad_lq(&self.plan, &self.grid, &cur.vh[j], q));
        }
        Ok((
            cur,
            PicardReport {
                p,
                q,
                horizon: self.cfg.horizon,
                distances,
                ratios,
                converged_after,
                weighted_u: wu_max,
                weighted_grad_v: wv_max,
            },
        ))
    }

    fn trajectory(&self, it: &Iterate, template: &SimState) -> Trajectory {
        let states = self
            .times
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let u = ScalarField::from_vec_unchecked(self.grid, it.u[j].clone());
                let v = ScalarField::from_vec_unchecked(self.grid, self.plan.inverse(&it.vh[j]));
                template.evolved(t, u, v)
            })
            .collect();
        Trajectory { states }
    }
}

/// Iterates `Φ` and returns the fixed point on every node, starting with
/// `t = 0`.
pub fn picard_trajectory(
    u0: &ScalarField,
    v0: &ScalarField,
    cfg: &PicardConfig,
) -> Result<(Trajectory, PicardReport)> {
    let init = SimState::new(0.0, u0.clone(), v0.clone())?;
    init.require_nonnegative_data()?;
    let h = Harness::new(u0, v0, cfg)?;
    let (it, report) = h.solve()?;
    Ok((h.trajectory(&it, &init), report))
}

/// Fixed point of `Φ` at `t = T` together with the iteration report.
pub fn picard_solve(
    u0: &ScalarField,
    v0: &ScalarField,
    cfg: &PicardConfig,
) -> Result<(SimState, PicardReport)> {
    let (traj, report) = picard_trajectory(u0, v0, cfg)?;
    let last = traj.states.into_iter().last().ok_or(Error::EmptyTrajectory)?;
    Ok((last, report))
}

/// `sup_{0<t≤T} ‖u(t) − ũ(t)‖₁ / (‖du‖₁ + ‖∇dv‖₂)` for the fixed points
/// started from `(u0, v0)` and `(u0 + du, v0 + dv)`; `0` when both
/// perturbations vanish.
pub fn continuous_dependence_probe(
    u0: &ScalarField,
    v0: &ScalarField,
    du: &ScalarField,
    dv: &ScalarField,
    cfg: &PicardConfig,
) -> Result<f64> {
    let du1 = du.lp_norm(1.0)?;
    let (gx, gy) = crate::spectral::gradient(dv)?;
    let dv_h1 = (gx.l2_raw().powi(2) + gy.l2_raw().powi(2)).sqrt();
    let u1 = u0.lp_norm(1.0)?;
    if du1 > 0.01 * u1 {
        return Err(Error::InvalidConfig(format!(
            "perturbation ‖du‖₁ = {du1:e} exceeds 1% of ‖u0‖₁ = {u1:e}"
        )));
    }
    if du1 + dv_h1 == 0.0 {
        return Ok(0.0);
    }
    let (a, _) = picard_trajectory(u0, v0, cfg)?;
    let (b, _) = picard_trajectory(&u0.add(du)?, &v0.add(dv)?, cfg)?;
    let mut sup = 0.0f64;
    for (sa, sb) in a.states.iter().zip(&b.states).skip(1) {
        sup = sup.max(sa.u.sub(&sb.u)?.lp_raw(1.0));
    }
    Ok(sup / (du1 + dv_h1))
}
