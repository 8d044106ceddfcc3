//! Evaluation of each inequality on a single trial.

use std::f64::consts::PI;

use crate::diagnostics::CutoffSpec;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::oracle::family::TrialDomain;
use crate::oracle::report::TrialResult;
use crate::spectral::{gradient, heat_propagate, SpectralCoeffs};

/// Overflow guard on `exp(|f|)`.
pub const MAX_EXP_ARGUMENT: f64 = 500.0;

/// `‖∇f‖₂²` by Parseval.
pub fn dirichlet_energy(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let c = SpectralCoeffs::from_field(f);
    let n = grid.n();
    let mut s = 0.0;
    for iy in 0..n {
        let ky = grid.wavenumber(iy);
        for ix in 0..n {
            let kx = grid.wavenumber(ix);
            s += (kx * kx + ky * ky) * c.mode(ix, iy).norm_sqr();
        }
    }
    grid.area() * s
}

fn check_supported(f: &ScalarField, domain: &TrialDomain) -> Result<()> {
    let sup = f.sup_abs();
    let n = f.grid().n();
    for iy in 0..n {
        let y = f.grid().coord(iy);
        for ix in 0..n {
            if !domain.contains(f.grid().coord(ix), y) && f.at(ix, iy).abs() > 1e-12 * sup {
                return Err(Error::NotSupported);
            }
        }
    }
    Ok(())
}

/// `∫_D exp|f|` and `‖∇f‖₂²` for a trial supported in `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmSides {
    pub exp_integral: f64,
    pub energy: f64,
    pub area: f64,
}

impl TmSides {
    /// `∫_D e^{|f|} / (|D| exp(‖∇f‖²/κ))`.
    pub fn ratio(&self, kappa: f64) -> f64 {
        self.exp_integral / (self.area * (self.energy / kappa).exp())
    }
}

pub fn tm_sides(f: &ScalarField, domain: &TrialDomain) -> Result<TmSides> {
    f.check_finite()?;
    let sup = f.sup_abs();
    if sup > MAX_EXP_ARGUMENT {
        return Err(Error::Overflow(sup));
    }
    check_supported(f, domain)?;
    Ok(TmSides {
        exp_integral: f.map(|v| v.abs().exp()).integrate_where(|x, y| domain.contains(x, y)),
        energy: dirichlet_energy(f),
        area: domain.area(),
    })
}

/// `∫_D exp|f| ≤ C_TM |D| exp(‖∇f‖²_{L²(D)} / κ)` with `κ = 16π`.
pub fn tm_check(f: &ScalarField, domain: &TrialDomain, c_tm: f64) -> Result<TrialResult> {
    tm_check_with(f, domain, c_tm, 16.0 * PI)
}

/// [`tm_check`] with the constant `16π` replaced by `kappa`.
pub fn tm_check_with(
    f: &ScalarField,
    domain: &TrialDomain,
    c_tm: f64,
    kappa: f64,
) -> Result<TrialResult> {
    let s = tm_sides(f, domain)?;
    Ok(TrialResult {
        trial_id: 0,
        lhs: s.exp_integral,
        rhs: c_tm * s.area * (s.energy / kappa).exp(),
        params: String::new(),
    })
}

/// `∫gh ≤ ∫g log g + M log(∫e^h) − M log M` over `D`, `M = ∫_D g`.
pub fn nss_check(g: &ScalarField, h: &ScalarField, domain: &TrialDomain) -> Result<TrialResult> {
    g.grid().check_same(h.grid())?;
    g.check_finite()?;
    h.check_finite()?;
    if g.min() < 0.0 {
        return Err(Error::InitialData("g must be nonnegative".into()));
    }
    let grid = g.grid();
    let n = grid.n();
    let (mut m, mut gh, mut glog, mut eh) = (0.0, 0.0, 0.0, 0.0);
    for iy in 0..n {
        let y = grid.coord(iy);
        for ix in 0..n {
            if !domain.contains(grid.coord(ix), y) {
                continue;
            }
            let (gv, hv) = (g.at(ix, iy), h.at(ix, iy));
            m += gv;
            gh += gv * hv;
            if gv > 0.0 {
                glog += gv * gv.ln();
            }
            eh += hv.exp();
        }
    }
    let a = grid.cell_area();
    let m = a * m;
    if m == 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(TrialResult {
        trial_id: 0,
        lhs: a * gh,
        rhs: a * glog + m * (a * eh).ln() - m * m.ln(),
        params: String::new(),
    })
}

/// Every term of the weighted `L²` and `L³` bounds for one `f` and `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedTerms {
    /// `∫|f|²φ`
    pub l2_lhs: f64,
    /// `2(∫_{|f|>1, supp φ}|f|)(∫_{|f|>1}|∇f|²φ/(1+|f|)) + 4(∫|f∇φ^{1/2}|)² + 4∫|f|φ`
    pub l2_rhs: f64,
    /// `∫|f|³φ`
    pub l3_lhs: f64,
    /// `(∫_{supp φ}(1+|f|)ln(1+|f|))(∫|∇f|²φ)`, to be multiplied by `ε`
    pub l3_entropy: f64,
    /// `(∫|f^{3/2}∇φ^{1/2}|)²`, multiplied by `C`
    pub l3_boundary: f64,
    /// `∫|f|φ`, multiplied by `C_ε`
    pub l3_mass: f64,
}

impl WeightedTerms {
    pub fn quadratic(&self) -> TrialResult {
        TrialResult {
            trial_id: 0,
            lhs: self.l2_lhs,
            rhs: self.l2_rhs,
            params: String::new(),
        }
    }

    pub fn cubic(&self, eps: f64, c: f64, c_eps: f64) -> TrialResult {
        TrialResult {
            trial_id: 0,
            lhs: self.l3_lhs,
            rhs: eps * self.l3_entropy + c * self.l3_boundary + c_eps * self.l3_mass,
            params: String::new(),
        }
    }
}

pub fn weighted_terms(f: &ScalarField, phi: &CutoffSpec) -> Result<WeightedTerms> {
    f.grid().check_same(phi.profile.grid())?;
    let (fx, fy) = gradient(f)?;
    let (sx, sy) = phi.gradient_of_sqrt();
    let p = phi.profile.as_slice();
    let mut t = [0.0f64; 9];
    for i in 0..p.len() {
        let a = f.as_slice()[i].abs();
        let g2 = fx.as_slice()[i].powi(2) + fy.as_slice()[i].powi(2);
        let sq = (sx.as_slice()[i].powi(2) + sy.as_slice()[i].powi(2)).sqrt();
        if a > 1.0 {
            if p[i] > 0.0 {
                t[0] += a;
            }
            t[1] += g2 / (1.0 + a) * p[i];
        }
        t[2] += a * sq;
        t[3] += a * p[i];
        t[4] += a * a * p[i];
        t[5] += a * a * a * p[i];
        if p[i] > 0.0 {
            t[6] += (1.0 + a) * a.ln_1p();
        }
        t[7] += g2 * p[i];
        t[8] += a.powf(1.5) * sq;
    }
    let h2 = f.grid().cell_area();
    let t = t.map(|v| v * h2);
    Ok(WeightedTerms {
        l2_lhs: t[4],
        l2_rhs: 2.0 * t[0] * t[1] + 4.0 * t[2] * t[2] + 4.0 * t[3],
        l3_lhs: t[5],
        l3_entropy: t[6] * t[7],
        l3_boundary: t[8] * t[8],
        l3_mass: t[3],
    })
}

/// Quadratic bound result and the cubic terms for `ε`, with the cubic
/// constants supplied by the caller.
pub fn weighted_l2l3_check(
    f: &ScalarField,
    phi: &CutoffSpec,
    eps: f64,
    c: f64,
    c_eps: f64,
) -> Result<(TrialResult, TrialResult)> {
    if !(eps > 0.0) {
        return Err(Error::config("eps", "must be > 0"));
    }
    let w = weighted_terms(f, phi)?;
    Ok((w.quadratic(), w.cubic(eps, c, c_eps)))
}

/// Smallest `C_ε` making every trial pass for a fixed `C`.
pub fn required_c_eps(terms: &[WeightedTerms], eps: f64, c: f64) -> f64 {
    terms
        .iter()
        .filter(|w| w.l3_mass > 0.0)
        .map(|w| (w.l3_lhs - eps * w.l3_entropy - c * w.l3_boundary) / w.l3_mass)
        .fold(0.0, f64::max)
}

/// Fits `(C, C_ε)` by minimising the mean right-hand side
/// `C·mean(boundary) + C_ε(C)·mean(mass)` over `C ≥ 0`, where `C_ε(C)` is
/// [`required_c_eps`]. The objective is convex and piecewise linear in `C`.
pub fn fit_cubic(terms: &[WeightedTerms], eps: f64) -> (f64, f64) {
    let n = terms.len().max(1) as f64;
    let mb = terms.iter().map(|w| w.l3_boundary).sum::<f64>() / n;
    let mm = terms.iter().map(|w| w.l3_mass).sum::<f64>() / n;
    let obj = |c: f64| c * mb + required_c_eps(terms, eps, c) * mm;
    // C beyond which C_ε can be zero
    let hi = terms
        .iter()
        .filter(|w| w.l3_boundary > 0.0)
        .map(|w| (w.l3_lhs - eps * w.l3_entropy) / w.l3_boundary)
        .fold(0.0, f64::max);
    let (mut a, mut b) = (0.0, hi.max(0.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c1 = b - g * (b - a);
        let c2 = a + g * (b - a);
        if obj(c1) <= obj(c2) {
            b = c2;
        } else {
            a = c1;
        }
    }
    let c = 0.5 * (a + b);
    let best = [0.0, c, hi]
        .into_iter()
        .min_by(|x, y| obj(*x).total_cmp(&obj(*y)))
        .expect("non-empty");
    (best, required_c_eps(terms, eps, best))
}

/// Empirical constant of `‖∂^α e^{tΔ}f‖_p ≤ C t^{−(1/q−1/p)−|α|/2}‖f‖_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatReport {
    pub p: f64,
    pub q: f64,
    pub alpha_order: usize,
    /// `(t, ratio)` for every sampled time.
    pub ratios: Vec<(f64, f64)>,
    pub empirical_c: f64,
}

pub fn heat_lplq_check(
    f: &ScalarField,
    p: f64,
    q: f64,
    alpha_order: usize,
    t_grid: &[f64],
) -> Result<HeatReport> {
    if !(q >= 1.0 && q <= p) {
        return Err(Error::ExponentOrdering { p, q });
    }
    if alpha_order > 1 {
        return Err(Error::config("alpha_order", "only |α| ∈ {0, 1} is supported"));
    }
    let fq = f.lp_norm(q)?;
    let expo = |t: f64| {
        let inv = |r: f64| if r.is_infinite() { 0.0 } else { 1.0 / r };
        t.powf(inv(q) - inv(p) + alpha_order as f64 / 2.0)
    };
    let mut ratios = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let g = heat_propagate(f, t, 0.0)?;
        let norm = if alpha_order == 0 {
            g.lp_raw(p)
        } else {
            let (gx, gy) = gradient(&g)?;
            gx.lp_raw(p).max(gy.lp_raw(p))
        };
        ratios.push((t, norm * expo(t) / fq));
    }
    let empirical_c = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(HeatReport {
        p,
        q,
        alpha_order,
        ratios,
        empirical_c,
    })
}

/// Both sides of the Gagliardo–Nirenberg forms
/// `‖g‖₄² ≤ C‖g‖₂‖∇g‖₂` and `‖g‖₃³ ≤ C‖g‖₁‖∇g‖₂²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnTerms {
    pub l4_squared: f64,
    pub l2_times_grad: f64,
    pub l3_cubed: f64,
    pub l1_times_grad_sq: f64,
}

impl GnTerms {
    pub fn quartic_ratio(&self) -> f64 {
        self.l4_squared / self.l2_times_grad
    }

    pub fn cubic_ratio(&self) -> f64 {
        self.l3_cubed / self.l1_times_grad_sq
    }
}

/// Rejects fields with no gradient, where neither form says anything on a
/// torus.
pub fn gn_check(f: &ScalarField) -> Result<GnTerms> {
    f.check_finite()?;
    let e = dirichlet_energy(f);
    if !(e > 1e-300) {
        return Err(Error::InvalidConfig(
            "constant field: the inequality degenerates".into(),
        ));
    }
    Ok(GnTerms {
        l4_squared: f.lp_raw(4.0).powi(2),
        l2_times_grad: f.l2_raw() * e.sqrt(),
        l3_cubed: f.lp_raw(3.0).powi(3),
        l1_times_grad_sq: f.lp_raw(1.0) * e,
    })
}
