use std::f64::consts::PI;

use ks2d::diagnostics::CutoffSpec;
use ks2d::field::{gaussian, heat_kernel};
use ks2d::oracle::{
    fit_cubic, gn_check, heat_lplq_check, moser_eps_ladder, nss_check, required_c_eps,
    tm_check, tm_sharpness_probe, tm_sides, verify_inequalities, weighted_l2l3_check,
    weighted_terms, write_reports_csv, FamilyKind, OracleConfig, TrialDomain, TrialFamily,
    CSV_HEADER,
};
use ks2d::{Error, ScalarField};
use proptest::prelude::*;

fn domain() -> TrialDomain {
    TrialDomain::standard()
}

fn bump(d: &TrialDomain, amp: f64, width: f64) -> ScalarField {
    d.confine(&gaussian(d.grid, 1.0, width, (0.5, -0.3)).map(|v| v * amp * 2.0 * PI * width * width))
}

#[test]
fn tm_on_zero_field() {
    let d = domain();
    let z = ScalarField::zeros(d.grid);
    let r = tm_check(&z, &d, 1.0).unwrap();
    assert!((r.lhs - d.area()).abs() < 1e-9);
    assert!((r.rhs - d.area()).abs() < 1e-9);
    assert!(!r.violates());
    assert!(tm_check(&z, &d, 0.99).unwrap().violates());
}

#[test]
fn tm_guards() {
    let d = domain();
    let huge = bump(&d, 600.0, 0.5);
    assert!(matches!(tm_sides(&huge, &d), Err(Error::Overflow(_))));
    let outside = ScalarField::constant(d.grid, 1.0);
    let err = tm_sides(&outside, &d).unwrap_err();
    assert!(err.to_string().contains("not supported in D"), "{err}");
}

#[test]
fn tm_holds_for_scaled_bumps() {
    let d = domain();
    for amp in [0.5, 2.0, 8.0, 20.0] {
        let r = tm_check(&bump(&d, amp, 0.8), &d, 1.5).unwrap();
        assert!(!r.violates(), "amp {amp}: {} > {}", r.lhs, r.rhs);
    }
}

#[test]
fn moser_ratio_decays_at_sharp_constant_and_less_when_enlarged() {
    let d = domain();
    let eps = moser_eps_ladder(&d, 5);
    let a = tm_sharpness_probe(&d, 1.0, 16.0 * PI, &eps).unwrap();
    let b = tm_sharpness_probe(&d, 1.0, 17.0 * PI, &eps).unwrap();
    assert!(a.max_ratio() <= 1.0);
    assert!(a.growth() < b.growth());
}

#[test]
fn nss_equality_case() {
    let d = domain();
    let g = gaussian(d.grid, 3.0, 1.0, (0.0, 0.0)).map(|v| v + 1e-3);
    let h = g.map(|v| v.ln() + 2.0);
    let r = nss_check(&g, &h, &d).unwrap();
    assert!(r.margin().abs() <= 1e-10, "{}", r.margin());
}

#[test]
fn nss_uniform_and_errors() {
    let d = domain();
    let g = ScalarField::constant(d.grid, 0.5);
    let h = ScalarField::from_fn(d.grid, |x, y| (x * 0.7).sin() + 0.3 * y);
    let r = nss_check(&g, &h, &d).unwrap();
    assert!(r.margin() >= -1e-12 * (r.lhs.abs() + r.rhs.abs()));
    assert!(matches!(nss_check(&ScalarField::zeros(d.grid), &h, &d), Err(Error::ZeroMass)));
    assert!(nss_check(&g.scale(-1.0), &h, &d).is_err());
}

#[test]
fn weighted_bounds_for_zero_and_small_constant() {
    let d = domain();
    let phi = CutoffSpec::exterior(d.grid, 1.0);
    let (q, c) = weighted_l2l3_check(&ScalarField::zeros(d.grid), &phi, 0.1, 1.0, 1.0).unwrap();
    assert_eq!((q.lhs, q.rhs, c.lhs, c.rhs), (0.0, 0.0, 0.0, 0.0));

    let k = 0.6;
    let f = ScalarField::constant(d.grid, k);
    let w = weighted_terms(&f, &phi).unwrap();
    let (sx, sy) = phi.gradient_of_sqrt();
    let grad_sqrt = sx.mul(&sx).unwrap().add(&sy.mul(&sy).unwrap()).unwrap().map(f64::sqrt);
    let boundary = k * grad_sqrt.integrate().unwrap();
    let mass = k * phi.profile.integrate().unwrap();
    let expect = 4.0 * boundary * boundary + 4.0 * mass;
    assert!((w.l2_rhs - expect).abs() <= 1e-10 * expect);
    assert!((w.l2_lhs - k * k * phi.profile.integrate().unwrap()).abs() <= 1e-10 * w.l2_lhs);
    assert!(!w.quadratic().violates());
}

#[test]
fn cubic_constant_grows_as_eps_shrinks() {
    let d = domain();
    let phi = CutoffSpec::exterior(d.grid, 1.0);
    let trials = TrialFamily::new(FamilyKind::RandomBandlimited, 3).generate(&d, 24);
    let terms: Vec<_> = trials
        .iter()
        .map(|t| weighted_terms(&t.field, &phi).unwrap())
        .collect();
    let (c, c1) = fit_cubic(&terms, 1.0);
    let c01 = required_c_eps(&terms, 0.1, c);
    let c001 = required_c_eps(&terms, 0.01, c);
    assert!(c1 <= c01 && c01 <= c001, "{c1} {c01} {c001}");
    for w in &terms {
        assert!(!w.cubic(0.1, c, c01).violates());
    }
}

#[test]
fn heat_contraction_when_q_equals_p() {
    let d = domain();
    let f = bump(&d, 3.0, 0.5);
    let times = [1e-3, 1e-2, 0.1, 1.0, 5.0];
    for p in [1.0, 1.5, 2.0, 4.0] {
        let r = heat_lplq_check(&f, p, p, 0, &times).unwrap();
        assert!(r.empirical_c <= 1.0 + 1e-10, "p {p}: {}", r.empirical_c);
    }
}

#[test]
fn heat_l1_linf_constant() {
    let d = domain();
    let f = heat_kernel(d.grid, 1e-3, (0.0, 0.0));
    let r = heat_lplq_check(&f, f64::INFINITY, 1.0, 0, &[0.5, 1.0]).unwrap();
    let target = 1.0 / (4.0 * PI);
    assert!((r.empirical_c / target - 1.0).abs() < 0.05, "{}", r.empirical_c);
}

#[test]
fn heat_gradient_constant_is_stable() {
    let d = domain();
    let times: Vec<f64> = (0..12).map(|k| 1e-2 * 10f64.powf(k as f64 / 4.0)).collect();
    let cs: Vec<f64> = [0.4, 0.6, 1.0]
        .iter()
        .map(|&w| heat_lplq_check(&bump(&d, 1.0, w), 2.0, 1.0, 1, &times).unwrap().empirical_c)
        .collect();
    let (lo, hi) = cs.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    assert!(hi.is_finite() && hi / lo < 2.0, "{cs:?}");
}

#[test]
fn heat_exponent_ordering() {
    let d = domain();
    let f = bump(&d, 1.0, 0.5);
    assert!(matches!(
        heat_lplq_check(&f, 1.0, 2.0, 0, &[1.0]),
        Err(Error::ExponentOrdering { .. })
    ));
    assert!(heat_lplq_check(&f, 2.0, 1.0, 2, &[1.0]).is_err());
}

#[test]
fn gn_degenerate_and_gaussian_widths() {
    let d = domain();
    assert!(gn_check(&ScalarField::constant(d.grid, 2.0)).is_err());
    let ratios: Vec<f64> = [0.4, 0.7, 1.2]
        .iter()
        .map(|&w| gn_check(&bump(&d, 1.0, w)).unwrap().quartic_ratio())
        .collect();
    let spread = ratios.iter().cloned().fold(0.0f64, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1.5, "{ratios:?}");
}

#[test]
fn families_are_reproducible() {
    let d = domain();
    for kind in FamilyKind::ALL {
        let a = TrialFamily::new(kind, 11).generate(&d, 4);
        let b = TrialFamily::new(kind, 11).generate(&d, 4);
        let c = TrialFamily::new(kind, 12).generate(&d, 4);
        for i in 0..4 {
            assert_eq!(a[i].field, b[i].field);
            assert!(a[i].field.min() >= 0.0);
            tm_sides(&a[i].field, &d).unwrap();
        }
        assert_ne!(a[0].field, c[0].field);
    }
}

#[test]
fn small_oracle_run_has_no_violations() {
    let cfg = OracleConfig::new(FamilyKind::ALL.to_vec(), 6, 5);
    let reports = verify_inequalities(&cfg).unwrap();
    assert!(reports.len() >= 7);
    for r in &reports {
        assert_eq!(r.violations(), 0, "{}", r.inequality);
    }
    let c_tm = reports.iter().find_map(|r| r.fitted("C_TM")).unwrap();
    assert!(c_tm >= 1.0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.csv");
    write_reports_csv(&path, &reports).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let expected: usize = reports.iter().map(|r| r.trials.len()).sum();
    assert_eq!(lines.count(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nss_holds_for_gaussian_pairs(
        w in 0.3f64..2.0, x in -2.0f64..2.0, a in 0.0f64..3.0, wh in 0.5f64..3.0,
    ) {
        let d = domain();
        let g = d.confine(&gaussian(d.grid, 5.0, w, (x, 0.0)));
        let h = gaussian(d.grid, a, wh, (0.0, x)).scale(20.0);
        let r = nss_check(&g, &h, &d).unwrap();
        prop_assert!(r.margin() >= -1e-12 * (r.lhs.abs() + r.rhs.abs()));
    }

    #[test]
    fn heat_lp_contraction(amp in 0.1f64..10.0, w in 0.3f64..2.0, p in 1.0f64..6.0) {
        let d = domain();
        let r = heat_lplq_check(&bump(&d, amp, w), p, p, 0, &[1e-2, 0.3, 2.0]).unwrap();
        prop_assert!(r.empirical_c <= 1.0 + 1e-10);
    }
}
