//! Runs every inequality over sampled families and fits the constants.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagnostics::CutoffSpec;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::oracle::checks::{
    gn_check, heat_lplq_check, nss_check, required_c_eps, tm_sides, weighted_terms, GnTerms,
    TmSides, WeightedTerms,
};
use crate::oracle::family::{FamilyKind, Trial, TrialDomain, TrialFamily};
use crate::oracle::report::{InequalityReport, TrialResult};
use crate::oracle::sharpness::{moser_eps_ladder, moser_trials};
use crate::solver::log_spaced;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub families: Vec<FamilyKind>,
    /// Trials drawn from each family.
    pub trials: usize,
    pub seed: u64,
    /// `ε` values of the cubic bound; `C` is fitted at the largest.
    pub eps: Vec<f64>,
    /// Radius of the exterior cut-off used as `φ` in the weighted bounds.
    pub weight_radius: f64,
    /// Times for the heat `L¹ → L²` gradient bound.
    pub heat_times: Vec<f64>,
    /// Include Moser functions tuned to `16π` when fitting `C_TM`.
    pub moser_in_tm_fit: bool,
}

impl OracleConfig {
    pub fn new(families: Vec<FamilyKind>, trials: usize, seed: u64) -> Self {
        Self {
            families,
            trials,
            seed,
            eps: vec![1.0, 0.1, 0.01],
            weight_radius: 1.0,
            heat_times: log_spaced(10.0, 12, 1e-3),
            moser_in_tm_fit: true,
        }
    }
}

struct TrialData {
    trial: Trial,
    nss: TrialResult,
    weighted: WeightedTerms,
    tm: TmSides,
    gn: GnTerms,
    heat_c: f64,
}

/// Smooth companion field `h` for the NSS bound, reproducible per trial.
fn nss_partner(domain: &TrialDomain, seed: u64, id: usize) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id as u64);
    let l = domain.grid.box_length();
    let waves: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(1..=6))
        .map(|_| {
            (
                rng.random_range(-4i32..=4) as f64,
                rng.random_range(-4i32..=4) as f64,
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let amp = rng.random_range(0.0..4.0);
    let offset = rng.random_range(-2.0..2.0);
    ScalarField::from_fn(domain.grid, |x, y| {
        offset
            + amp
                * waves
                    .iter()
                    .map(|&(kx, ky, c, ph)| c * (2.0 * PI * (kx * x + ky * y) / l + ph).cos())
                    .sum::<f64>()
    })
}

fn evaluate(
    domain: &TrialDomain,
    phi: &CutoffSpec,
    cfg: &OracleConfig,
    trial: Trial,
) -> Result<TrialData> {
    let h = nss_partner(domain, cfg.seed, trial.id);
    let heat = heat_lplq_check(&trial.field, 2.0, 1.0, 1, &cfg.heat_times)?;
    Ok(TrialData {
        nss: nss_check(&trial.field, &h, domain)?,
        weighted: weighted_terms(&trial.field, phi)?,
        tm: tm_sides(&trial.field, domain)?,
        gn: gn_check(&trial.field)?,
        heat_c: heat.empirical_c,
        trial,
    })
}

fn with_id(mut r: TrialResult, t: &Trial) -> TrialResult {
    r.trial_id = t.id;
    r.params = t.params.clone();
    r
}

/// Fitted `C` for `lhs ≤ C·structure`, and the report using it.
fn fit_ratio(
    name: &str,
    family: &str,
    seed: u64,
    data: &[TrialData],
    sides: impl Fn(&TrialData) -> (f64, f64),
) -> InequalityReport {
    let c = data
        .iter()
        .map(|d| {
            let (l, s) = sides(d);
            l / s
        })
        .fold(0.0, f64::max);
    let trials = data
        .iter()
        .map(|d| {
            let (l, s) = sides(d);
            with_id(
                TrialResult {
                    trial_id: 0,
                    lhs: l,
                    rhs: c * s,
                    params: String::new(),
                },
                &d.trial,
            )
        })
        .collect();
    let mut r = InequalityReport::new(name, family, seed, trials);
    r.fitted.push(("C".into(), c));
    r
}

/// Every inequality over the union of the configured families on the
/// standard domain. Constants are fitted over the union.
pub fn verify_inequalities(cfg: &OracleConfig) -> Result<Vec<InequalityReport>> {
    verify_on(&TrialDomain::standard(), cfg)
}

pub fn verify_on(domain: &TrialDomain, cfg: &OracleConfig) -> Result<Vec<InequalityReport>> {
    if cfg.families.is_empty() || cfg.trials == 0 {
        return Err(Error::config("trials", "need at least one family and one trial"));
    }
    let phi = CutoffSpec::exterior(domain.grid, cfg.weight_radius);
    let mut trials = Vec::new();
    for &kind in &cfg.families {
        for mut t in TrialFamily::new(kind, cfg.seed).generate(domain, cfg.trials) {
            t.id = trials.len();
            t.params = format!("{kind}:{}", t.params);
            trials.push(t);
        }
    }
    let data = trials
        .into_par_iter()
        .map(|t| evaluate(domain, &phi, cfg, t))
        .collect::<Result<Vec<_>>>()?;

    let family = cfg
        .families
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join("+");
    let seed = cfg.seed;
    let mut reports = Vec::new();

    reports.push(InequalityReport::new(
        "nss",
        &family,
        seed,
        data.iter().map(|d| with_id(d.nss.clone(), &d.trial)).collect(),
    ));
    reports.push(InequalityReport::new(
        "weighted_l2",
        &family,
        seed,
        data.iter()
            .map(|d| with_id(d.weighted.quadratic(), &d.trial))
            .collect(),
    ));

    let terms: Vec<WeightedTerms> = data.iter().map(|d| d.weighted).collect();
    let mut eps = cfg.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let (c, _) = crate::oracle::checks::fit_cubic(&terms, eps[0]);
    for &e in &eps {
        let c_eps = required_c_eps(&terms, e, c);
        let mut r = InequalityReport::new(
            &format!("weighted_l3_eps{e}"),
            &family,
            seed,
            data.iter()
                .map(|d| with_id(d.weighted.cubic(e, c, c_eps), &d.trial))
                .collect(),
        );
        r.fitted.push(("C".into(), c));
        r.fitted.push(("C_eps".into(), c_eps));
        reports.push(r);
    }

    let kappa = 16.0 * PI;
    let mut c_tm = data.iter().map(|d| d.tm.ratio(kappa)).fold(1.0, f64::max);
    if cfg.moser_in_tm_fit {
        for (_, _, f) in moser_trials(domain, &moser_eps_ladder(domain, 6), kappa) {
            c_tm = c_tm.max(tm_sides(&f, domain)?.ratio(kappa));
        }
    }
    let mut tm = InequalityReport::new(
        "trudinger_moser",
        &family,
        seed,
        data.iter()
            .map(|d| {
                with_id(
                    TrialResult {
                        trial_id: 0,
                        lhs: d.tm.exp_integral,
                        rhs: c_tm * d.tm.area * (d.tm.energy / kappa).exp(),
                        params: String::new(),
                    },
                    &d.trial,
                )
            })
            .collect(),
    );
    tm.fitted.push(("C_TM".into(), c_tm));
    reports.push(tm);

    reports.push(fit_ratio("gn_quartic", &family, seed, &data, |d| {
        (d.gn.l4_squared, d.gn.l2_times_grad)
    }));
    reports.push(fit_ratio("gn_cubic", &family, seed, &data, |d| {
        (d.gn.l3_cubed, d.gn.l1_times_grad_sq)
    }));
    reports.push(fit_ratio("heat_l1_l2_grad", &family, seed, &data, |d| {
        (d.heat_c, 1.0)
    }));
    Ok(reports)
}
