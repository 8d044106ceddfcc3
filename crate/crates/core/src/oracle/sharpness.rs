//! Moser-function probe of the exponent in the Trudinger–Moser bound.

use std::f64::consts::PI;

use crate::error::Result;
use crate::field::ScalarField;
use crate::oracle::checks::tm_sides;
use crate::oracle::family::{moser_function, TrialDomain};

/// Outer radius of the probe functions; inside the region where `ψ_R = 1`
/// on the standard domain.
pub const MOSER_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoserSample {
    pub eps: f64,
    /// `ln(ρ/ε)`
    pub ell: f64,
    pub beta: f64,
    /// `β` over the amplitude `κ√(ℓ/2π)/2` that is optimal at this `ℓ`.
    pub beta_factor: f64,
    /// `∫_D e^{|f|} / (|D| exp(‖∇f‖²/κ))`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessProbe {
    pub kappa: f64,
    pub c_tm: f64,
    pub samples: Vec<MoserSample>,
    /// Samples whose ratio exceeds `c_tm`.
    pub violations: usize,
}

impl SharpnessProbe {
    pub fn max_ratio(&self) -> f64 {
        self.samples.iter().map(|s| s.ratio).fold(0.0, f64::max)
    }

    /// Best ratio at each `ε`, ordered from the widest to the narrowest core.
    pub fn envelope(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for s in &self.samples {
            match out.iter_mut().find(|(e, _)| *e == s.eps) {
                Some(slot) => slot.1 = slot.1.max(s.ratio),
                None => out.push((s.eps, s.ratio)),
            }
        }
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        out
    }

    /// Ratio at the optimal amplitude, narrowest core over widest core.
    /// Above 1 when the exponent is too large for the bound to hold.
    pub fn growth(&self) -> f64 {
        let opt: Vec<&MoserSample> = self.samples.iter().filter(|s| s.beta_factor == 1.0).collect();
        let widest = opt.iter().max_by(|a, b| a.eps.total_cmp(&b.eps));
        let narrowest = opt.iter().min_by(|a, b| a.eps.total_cmp(&b.eps));
        match (widest, narrowest) {
            (Some(a), Some(b)) => b.ratio / a.ratio,
            _ => f64::NAN,
        }
    }
}

/// Core radii `ρ·e^{−ℓ}` for `ℓ` evenly spaced from 0.5 up to the finest
/// value the grid resolves (`ε ≥ 2h`).
pub fn moser_eps_ladder(domain: &TrialDomain, count: usize) -> Vec<f64> {
    let ell_max = (MOSER_RADIUS / (2.0 * domain.grid.spacing())).ln();
    (0..count)
        .map(|i| {
            let ell = 0.5 + (ell_max - 0.5) * i as f64 / (count.max(2) - 1) as f64;
            MOSER_RADIUS * (-ell).exp()
        })
        .collect()
}

/// Multiples of `β = κ√(ℓ/2π)/2`, the amplitude that maximises the ratio for
/// a unit-energy Moser function.
pub const BETA_FACTORS: [f64; 5] = [0.5, 0.75, 1.0, 1.25, 1.5];

/// Moser trials `β·m_ε` tuned to the exponent `kappa`, as
/// `(ε, β factor, field)`.
pub fn moser_trials(
    domain: &TrialDomain,
    eps: &[f64],
    kappa: f64,
) -> Vec<(f64, f64, ScalarField)> {
    let mut out = Vec::new();
    for &e in eps {
        let m = moser_function(domain.grid, MOSER_RADIUS, e);
        let ell = (MOSER_RADIUS / e).ln();
        let beta_opt = 0.5 * kappa * (ell / (2.0 * PI)).sqrt();
        for k in BETA_FACTORS {
            out.push((e, k, m.scale(k * beta_opt)));
        }
    }
    out
}

/// Evaluates the ratio at exponent `kappa` over Moser trials tuned to it,
/// counting samples above `c_tm`.
pub fn tm_sharpness_probe(
    domain: &TrialDomain,
    c_tm: f64,
    kappa: f64,
    eps: &[f64],
) -> Result<SharpnessProbe> {
    let mut samples = Vec::new();
    for (e, k, f) in moser_trials(domain, eps, kappa) {
        let s = tm_sides(&f, domain)?;
        let ell = (MOSER_RADIUS / e).ln();
        samples.push(MoserSample {
            eps: e,
            ell,
            beta: k * 0.5 * kappa * (ell / (2.0 * PI)).sqrt(),
            beta_factor: k,
            ratio: s.ratio(kappa),
        });
    }
    let violations = samples.iter().filter(|s| s.ratio > c_tm).count();
    Ok(SharpnessProbe {
        kappa,
        c_tm,
        samples,
        violations,
    })
}
