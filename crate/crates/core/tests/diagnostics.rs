use std::f64::consts::PI;
use std::sync::OnceLock;

use ks2d::diagnostics::{
    dissipation_dtilde, exterior_mass, exterior_norms, fm_identity_residual,
    fm_monotonicity_check, functional_fm, interior_entropy, interior_lyapunov_lr, interior_mass,
    local_min_u, lyapunov_l, lyapunov_lm, probe_ring, CutoffSpec, DiagnosticsRow,
};
use ks2d::field::{gaussian, heat_kernel};
use ks2d::solver::RunOutput;
use ks2d::{run, Error, GridSpec, RunConfig, ScalarField, SimState};
use proptest::prelude::*;

fn state(u: ScalarField, v: ScalarField) -> SimState {
    SimState::new(0.0, u, v).unwrap()
}

fn psi_sq_integral(grid: GridSpec, r: f64) -> f64 {
    let p = CutoffSpec::interior(grid, r).profile;
    p.mul(&p).unwrap().integrate().unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn lyapunov_of_constant_one() {
    let g = GridSpec::new(64, 16.0).unwrap();
    let s = state(ScalarField::constant(g, 1.0), ScalarField::zeros(g));
    assert!(lyapunov_l(&s, 0.0).unwrap().abs() < 1e-12);
    // ∫(1+u)ln(1+u) = 2 ln 2 per unit area
    close(lyapunov_lm(&s, 0.0).unwrap(), 256.0 * 2.0 * 2f64.ln(), 1e-12);
}

#[test]
fn lyapunov_of_heat_kernel_entropy() {
    let g = GridSpec::new(256, 32.0).unwrap();
    let s = state(heat_kernel(g, 1.0, (0.0, 0.0)), ScalarField::zeros(g));
    close(lyapunov_l(&s, 0.0).unwrap(), -(4.0 * PI).ln() - 1.0, 1e-8);
}

#[test]
fn fm_of_zero_u_with_kernel_v() {
    let g = GridSpec::new(256, 32.0).unwrap();
    let g1 = heat_kernel(g, 1.0, (0.0, 0.0));
    let s = state(ScalarField::zeros(g), g1);
    // ‖∇G_t‖² = 1/(16πt²)
    close(functional_fm(&s, 0.0).unwrap(), 0.5 / (16.0 * PI) - 1.0, 1e-8);
    assert!(dissipation_dtilde(&s, 0.0).unwrap() >= 0.0);
}

#[test]
fn zero_state_has_zero_functionals() {
    let g = GridSpec::new(32, 16.0).unwrap();
    let s = state(ScalarField::zeros(g), ScalarField::zeros(g));
    assert_eq!(functional_fm(&s, 0.0).unwrap(), 0.0);
    assert_eq!(dissipation_dtilde(&s, 0.0).unwrap(), 0.0);
}

#[test]
fn interior_functionals_of_constants() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let r = 0.4;
    let one = state(ScalarField::constant(g, 1.0), ScalarField::zeros(g));
    close(interior_lyapunov_lr(&one, r, 0.0).unwrap(), -psi_sq_integral(g, r), 1e-12);
    assert!(interior_entropy(&one, r).unwrap().abs() < 1e-12);

    let e = state(ScalarField::constant(g, PI.exp().ln().exp()), ScalarField::zeros(g));
    let expect = e.u.at(0, 0) * e.u.at(0, 0).ln() * psi_sq_integral(g, r);
    close(interior_entropy(&e, r).unwrap(), expect, 1e-12);
}

#[test]
fn exterior_mass_cases() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let r = 2.0;
    let inner = ScalarField::from_fn(g, |x, y| if x * x + y * y < 0.25 * r * r { 1.0 } else { 0.0 });
    let m = exterior_mass(&state(inner, ScalarField::zeros(g)), r).unwrap();
    assert_eq!(m.indicator, 0.0);

    let c = 0.7;
    let s = state(ScalarField::constant(g, c), ScalarField::zeros(g));
    let m = exterior_mass(&s, r).unwrap();
    let outside_cells = (0..g.n())
        .flat_map(|i| (0..g.n()).map(move |j| (i, j)))
        .filter(|&(i, j)| g.coord(i).powi(2) + g.coord(j).powi(2) > r * r)
        .count();
    close(m.indicator, c * outside_cells as f64 * g.cell_area(), 1e-12);
    close(m.indicator + interior_mass(&s, r), s.mass(), 1e-12);
    assert!(matches!(exterior_mass(&s, 5.0), Err(Error::Geometry(_))));
}

#[test]
fn exterior_norms_cases() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let r = 0.3;
    let inner = ScalarField::from_fn(g, |x, y| if x * x + y * y < r * r { 2.0 } else { 0.0 });
    let n = exterior_norms(&state(inner, ScalarField::zeros(g)), r).unwrap();
    assert_eq!(n.entropy_beyond_2r, 0.0);
    assert_eq!(n.u_l2_beyond_4r, 0.0);
    assert_eq!(n.u_lp_beyond_8r, 0.0);

    let c = 1.5;
    let n = exterior_norms(&state(ScalarField::constant(g, c), ScalarField::zeros(g)), r).unwrap();
    let area_beyond = |rho: f64| {
        let cells = (0..g.n())
            .flat_map(|i| (0..g.n()).map(move |j| (i, j)))
            .filter(|&(i, j)| g.coord(i).powi(2) + g.coord(j).powi(2) > rho * rho)
            .count();
        cells as f64 * g.cell_area()
    };
    close(n.entropy_beyond_2r, (1.0 + c) * (1.0 + c).ln() * area_beyond(2.0 * r), 1e-12);
    close(n.u_l2_beyond_4r, c * area_beyond(4.0 * r).sqrt(), 1e-12);
    close(n.u_lp_beyond_8r, c * area_beyond(8.0 * r).cbrt(), 1e-12);
    close(n.u_phi8r_inf, c, 1e-12);
}

#[test]
fn partition_of_unity() {
    let g = GridSpec::new(128, 16.0).unwrap();
    for r in [0.2, 0.3, 0.45] {
        let s = CutoffSpec::exterior(g, 8.0 * r)
            .profile
            .add(&CutoffSpec::interior(g, r).profile)
            .unwrap();
        assert!(s.as_slice().iter().all(|v| (v - 1.0).abs() <= 1e-15));
    }
}

#[test]
fn local_minimum_scans() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let s = state(ScalarField::constant(g, 0.3), ScalarField::zeros(g));
    assert_eq!(local_min_u(&s, (1.0, 1.0), 0.5).unwrap(), 0.3);
    assert!(matches!(local_min_u(&s, (0.0, 0.0), 0.01), Err(Error::EmptyDisk { .. })));

    let gs = state(gaussian(g, 1.0, 1.0, (0.0, 0.0)), ScalarField::zeros(g));
    let m = local_min_u(&gs, (0.0, 0.0), 1.0).unwrap();
    let mut direct = f64::INFINITY;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if g.coord(i).powi(2) + g.coord(j).powi(2) <= 1.0 {
                direct = direct.min(gs.u.at(i, j));
            }
        }
    }
    assert_eq!(m, direct);
    let p = probe_ring(&gs, 2.0, 0.5, 8).unwrap();
    assert!(p.min_u > 0.0 && p.min_u < m);
}

fn smooth_run(lambda: f64) -> RunOutput {
    let g = GridSpec::new(128, 16.0).unwrap();
    let mut cfg = RunConfig::new(g);
    cfg.lambda = lambda;
    cfg.t_end = 1.0;
    cfg.diag_every = 25;
    cfg.radii = vec![0.25];
    run(
        &gaussian(g, 4.0 * PI, 0.5, (0.0, 0.0)),
        &gaussian(g, 1.0, 1.0, (0.0, 0.0)),
        &cfg,
    )
    .unwrap()
    .into_result()
    .unwrap()
}

fn lambda_zero_run() -> &'static RunOutput {
    static RUN: OnceLock<RunOutput> = OnceLock::new();
    RUN.get_or_init(|| smooth_run(0.0))
}

#[test]
fn identity_residual_needs_three_rows() {
    let rows = &lambda_zero_run().rows;
    assert!(matches!(
        fm_identity_residual(&rows[..2], 0.0),
        Err(Error::InsufficientRows { needed: 3, got: 2 })
    ));
    let r = fm_identity_residual(&rows[10..13], 0.0).unwrap();
    assert!(r < 1e-2, "{r}");
}

#[test]
fn fm_decreases_without_degradation() {
    let rep = fm_monotonicity_check(&lambda_zero_run().rows, 0.0);
    assert!(rep.passed(), "{:?}", rep.violations);
    assert!(rep.slope_bound.is_none());
}

#[test]
fn injected_increase_is_reported() {
    let mut rows: Vec<DiagnosticsRow> = lambda_zero_run().rows.clone();
    let k = rows.len() / 2;
    for r in rows.iter_mut().skip(k) {
        r.fm += 5.0;
    }
    let rep = fm_monotonicity_check(&rows, 0.0);
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.violations[0].index, k);
    assert!(rep.max_violation > 4.0, "{}", rep.max_violation);
}

#[test]
fn slope_bound_with_degradation() {
    let out = smooth_run(1.0);
    let rep = fm_monotonicity_check(&out.rows, 1.0);
    let r0 = &out.rows[0];
    assert_eq!(rep.slope_bound, Some(r0.int_v + r0.mass_u));
    assert!(rep.passed(), "{:?}", rep.violations);
}

fn nonneg_field(n: usize) -> impl Strategy<Value = ScalarField> {
    prop::collection::vec(0.0f64..3.0, n * n)
        .prop_map(move |v| ScalarField::new(GridSpec::new(n, 6.0).unwrap(), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dissipation_is_nonnegative(u in nonneg_field(16), v in nonneg_field(16), lambda in 0.0f64..2.0) {
        let s = state(u, v);
        prop_assert!(dissipation_dtilde(&s, lambda).unwrap() >= 0.0);
    }

    #[test]
    fn exterior_and_interior_mass_add_up(u in nonneg_field(32), r in 0.2f64..1.4) {
        let s = state(u.clone(), u);
        let ext = exterior_mass(&s, r).unwrap().indicator;
        prop_assert!((ext + interior_mass(&s, r) - s.mass()).abs() <= 1e-12 * s.mass().max(1.0));
    }
}
