use std::f64::consts::PI;

use ks2d::field::gaussian;
use ks2d::solver::{
    blowup_check, continuous_dependence_probe, duhamel_step, picard_solve, picard_trajectory,
    rhs_v, weighted_xt_norms, BlowupCriterion, BlowupStatus, PicardConfig, RunOutcome, Trajectory,
};
use ks2d::spectral::heat_propagate;
use ks2d::{run, Error, GridSpec, RunConfig, ScalarField, Scheme, SimState};
use proptest::prelude::*;

fn grid() -> GridSpec {
    GridSpec::new(64, 16.0).unwrap()
}

fn sine(g: GridSpec) -> ScalarField {
    let l = g.box_length();
    ScalarField::from_fn(g, |x, _| (2.0 * PI * x / l).sin())
}

#[test]
fn rhs_v_examples() {
    let g = grid();
    let z = ScalarField::zeros(g);
    let s = SimState::new(0.0, z.clone(), ScalarField::constant(g, 2.0)).unwrap();
    assert!(rhs_v(&s, 0.0).unwrap().sup_abs() < 1e-14);

    let s = SimState::new(0.0, ScalarField::constant(g, 1.5), z.clone()).unwrap();
    assert!(rhs_v(&s, 0.0).unwrap().sub(&ScalarField::constant(g, 1.5)).unwrap().sup_abs() < 1e-14);

    let m = sine(g);
    let s = SimState::new(0.0, z, m.clone()).unwrap();
    let k2 = (2.0 * PI / 16.0).powi(2);
    let expect = m.scale(-(k2 + 1.0));
    assert!(rhs_v(&s, 1.0).unwrap().sub(&expect).unwrap().sup_abs() < 1e-12);
}

#[test]
fn decoupled_mode_is_pure_heat_flow() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let u0 = gaussian(g, 4.0 * PI, 0.5, (0.0, 0.0));
    let v0 = gaussian(g, 1.0, 1.0, (1.0, 0.0));
    let mut cfg = RunConfig::new(g);
    cfg.chemotaxis = false;
    cfg.t_end = 0.5;
    cfg.diag_every = 100;
    let out = run(&u0, &v0, &cfg).unwrap().into_result().unwrap();
    let exact = heat_propagate(&u0, 0.5, 0.0).unwrap();
    assert!(out.final_state.u.sub(&exact).unwrap().sup_abs() < 1e-10);
}

#[test]
fn vanishing_or_negative_data_is_rejected() {
    let g = grid();
    let cfg = RunConfig::new(g);
    let v0 = gaussian(g, 1.0, 1.0, (0.0, 0.0));
    let err = run(&ScalarField::zeros(g), &v0, &cfg).unwrap_err();
    assert!(matches!(err, Error::InitialData(_)), "{err}");
    let err = run(&v0.scale(-1.0), &v0, &cfg).unwrap_err();
    assert!(matches!(err, Error::InitialData(_)), "{err}");
}

#[test]
fn etd2_and_etd1_differ_at_second_order() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let s = SimState::new(
        0.0,
        gaussian(g, 4.0 * PI, 0.5, (0.0, 0.0)),
        gaussian(g, 0.5, 0.7, (0.4, 0.0)),
    )
    .unwrap();
    let gap = |dt: f64| {
        let mut cfg = RunConfig::new(g);
        cfg.dt = dt;
        cfg.scheme = Scheme::Etd2;
        let a = duhamel_step(&s, dt, &cfg).unwrap();
        cfg.scheme = Scheme::Etd1;
        let b = duhamel_step(&s, dt, &cfg).unwrap();
        a.u.sub(&b.u).unwrap().lp_norm(2.0).unwrap()
    };
    let ratio = gap(1e-3) / gap(5e-4);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn blowup_check_semantics() {
    let g = grid();
    let u = gaussian(g, 2.0 * PI, 1.0, (0.0, 0.0));
    let v = gaussian(g, 1.0, 1.0, (0.0, 0.0));
    let mut cfg = RunConfig::new(g);
    cfg.blowup_sup_threshold = Some(1e6);
    let s = SimState::new(0.0, u.clone(), v.clone()).unwrap();
    assert!(blowup_check(&s, &cfg).is_ok());

    let mut spike = u.as_slice().to_vec();
    spike[g.n() * g.n() / 2 + g.n() / 2] = 1e9;
    let s = SimState::new(0.0, ScalarField::new(g, spike).unwrap(), v.clone()).unwrap();
    match blowup_check(&s, &cfg) {
        BlowupStatus::BlownUp(r) => {
            assert_eq!(r.criterion, BlowupCriterion::SupThreshold);
            assert!(r.to_string().contains("sup threshold"));
        }
        BlowupStatus::Ok => panic!("spike not flagged"),
    }

    // equal energy in a low mode and a top-third mode
    let l = g.box_length();
    let half = ScalarField::from_fn(g, |x, _| {
        3.0 + (2.0 * PI * x / l).cos() + (2.0 * PI * 28.0 * x / l).cos()
    });
    let s = SimState::new(0.0, half, v).unwrap();
    match blowup_check(&s, &cfg) {
        BlowupStatus::BlownUp(r) => {
            assert_eq!(r.criterion, BlowupCriterion::TailThreshold);
            assert!((r.tail_fraction - 0.5).abs() < 1e-12);
            assert!(r.to_string().contains("tail threshold"));
        }
        BlowupStatus::Ok => panic!("tail not flagged"),
    }
}

#[test]
fn supercritical_run_reports_blowup() {
    let g = GridSpec::new(256, 16.0).unwrap();
    let u0 = gaussian(g, 12.0 * PI, 0.5, (0.0, 0.0));
    let v0 = gaussian(g, 1.0, 1.0, (0.0, 0.0));
    let mut cfg = RunConfig::new(g);
    cfg.blowup_sup_threshold = Some(100.0);
    cfg.t_end = 2.0;
    cfg.diag_every = 400;
    let out = run(&u0, &v0, &cfg).unwrap();
    let RunOutcome::Blowup { t_star, t_fail, .. } = out.outcome else {
        panic!("{:?}", out.outcome);
    };
    assert!(t_star < t_fail && t_fail <= 2.0);
    assert!(matches!(out.into_result(), Err(Error::Blowup { .. })));
}

fn small_data(g: GridSpec, mass: f64) -> (ScalarField, ScalarField) {
    (gaussian(g, mass, 0.8, (0.0, 0.0)), gaussian(g, 0.1, 1.0, (0.0, 0.0)))
}

#[test]
fn picard_without_flux_converges_at_once() {
    let g = grid();
    let (u0, v0) = small_data(g, 1.0);
    let mut cfg = PicardConfig::new(1e-2);
    cfg.chemotaxis = false;
    let (state, rep) = picard_solve(&u0, &v0, &cfg).unwrap();
    assert_eq!(rep.converged_after, Some(1), "{:?}", rep.distances);
    let exact = heat_propagate(&u0, 1e-2, 0.0).unwrap();
    assert!(state.u.sub(&exact).unwrap().sup_abs() < 1e-12);
}

#[test]
fn picard_contracts_for_small_data() {
    let (u0, v0) = small_data(grid(), 0.1);
    let (_, rep) = picard_solve(&u0, &v0, &PicardConfig::new(1e-2)).unwrap();
    assert!(rep.converged_after.is_some());
    assert!(rep.max_ratio() <= 0.5, "{:?}", rep.ratios);
}

#[test]
fn picard_agrees_with_time_stepping() {
    let g = grid();
    let (u0, v0) = small_data(g, 2.0);
    let t = 1e-2;
    let (state, _) = picard_solve(&u0, &v0, &PicardConfig::new(t)).unwrap();
    let mut cfg = RunConfig::new(g);
    cfg.dt = t / 2048.0;
    cfg.t_end = t;
    cfg.diag_every = 4096;
    cfg.tail_mass_tolerance = 1.0;
    let out = run(&u0, &v0, &cfg).unwrap().into_result().unwrap();
    let diff = state.u.sub(&out.final_state.u).unwrap().lp_norm(2.0).unwrap();
    let rel = diff / out.final_state.u.lp_norm(2.0).unwrap();
    assert!(rel < 1e-4, "{rel}");
}

#[test]
fn picard_rejects_bad_exponent() {
    let (u0, v0) = small_data(grid(), 1.0);
    let mut cfg = PicardConfig::new(1e-2);
    cfg.p = 2.5;
    assert!(matches!(picard_solve(&u0, &v0, &cfg), Err(Error::InvalidExponent(_))));
}

#[test]
fn continuous_dependence() {
    let g = grid();
    let (u0, v0) = small_data(g, 1.0);
    let cfg = PicardConfig::new(1e-2);
    let z = ScalarField::zeros(g);
    assert_eq!(continuous_dependence_probe(&u0, &v0, &z, &z, &cfg).unwrap(), 0.0);

    let bump = gaussian(g, 1.0, 1.0, (0.5, 0.0));
    let a = continuous_dependence_probe(&u0, &v0, &bump.scale(4e-3), &z, &cfg).unwrap();
    let b = continuous_dependence_probe(&u0, &v0, &bump.scale(2e-3), &z, &cfg).unwrap();
    assert!(a.is_finite() && a > 0.0);
    assert!((a / b - 1.0).abs() < 0.2, "{a} {b}");

    let too_big = bump.scale(0.5);
    assert!(continuous_dependence_probe(&u0, &v0, &too_big, &z, &cfg).is_err());
}

#[test]
fn weighted_norms_of_constant_trajectory() {
    let g = grid();
    let (f, v) = small_data(g, 1.0);
    let times = [0.1, 0.2, 0.5, 1.0];
    let traj = Trajectory::new(
        times
            .iter()
            .map(|&t| SimState::new(t, f.clone(), v.clone()).unwrap())
            .collect(),
    );
    let p = 1.5;
    let (a, _) = weighted_xt_norms(&traj, p, &times).unwrap();
    assert!((a - f.lp_norm(p).unwrap()).abs() < 1e-12);
    assert!(matches!(
        weighted_xt_norms(&Trajectory::new(Vec::new()), p, &times),
        Err(Error::EmptyTrajectory)
    ));
}

#[test]
fn weighted_norm_of_heat_flow_vanishes_at_small_times() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let (u0, v0) = small_data(g, 1.0);
    let mut cfg = PicardConfig::new(1.0);
    cfg.chemotaxis = false;
    let (traj, _) = picard_trajectory(&u0, &v0, &cfg).unwrap();
    let times: Vec<f64> = traj.states.iter().skip(1).map(|s| s.t).collect();
    let p = 1.5;
    let w = |ts: &[f64]| weighted_xt_norms(&traj, p, ts).unwrap().0;
    let early = w(&times[..8]);
    let earlier = w(&times[..2]);
    assert!(earlier < early && early < w(&times));
    assert!(w(&times) <= u0.lp_norm(p).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mass_is_conserved(mass in 0.5f64..30.0, cx in -1.0f64..1.0, lambda in 0.0f64..2.0) {
        let g = GridSpec::new(32, 16.0).unwrap();
        let u0 = gaussian(g, mass, 1.2, (cx, 0.0));
        let v0 = gaussian(g, 1.0, 1.5, (0.0, 0.0));
        let mut cfg = RunConfig::new(g);
        cfg.lambda = lambda;
        cfg.dt = 1e-2;
        cfg.t_end = 0.2;
        cfg.diag_every = 5;
        cfg.tail_mass_tolerance = 1.0;
        cfg.blowup_sup_threshold = Some(1e6);
        let out = run(&u0, &v0, &cfg).unwrap();
        let m0 = out.rows[0].mass_u;
        prop_assert!((m0 - mass).abs() <= 1e-3 * mass);
        for r in &out.rows {
            prop_assert!((r.mass_u - m0).abs() <= 1e-12 * m0);
        }
    }
}
