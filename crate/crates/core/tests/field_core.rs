use std::f64::consts::PI;

use ks2d::field::{gaussian, heat_kernel};
use ks2d::snapshot::{decode, encode};
use ks2d::spectral::{divergence, gradient, heat_propagate, laplacian, SpectralCoeffs};
use ks2d::{Error, GridSpec, ScalarField};
use proptest::prelude::*;

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).unwrap().sup_abs()
}

fn mode(grid: GridSpec, kx: f64) -> ScalarField {
    let l = grid.box_length();
    ScalarField::from_fn(grid, |x, _| (2.0 * PI * kx * x / l).sin())
}

#[test]
fn integrate_constant_and_zero() {
    let g = GridSpec::new(64, 32.0).unwrap();
    assert!((ScalarField::constant(g, 1.0).integrate().unwrap() - 1024.0).abs() < 1e-9);
    assert_eq!(ScalarField::zeros(g).integrate().unwrap(), 0.0);
}

#[test]
fn heat_kernel_has_unit_mass() {
    let g = GridSpec::new(256, 32.0).unwrap();
    let m = heat_kernel(g, 1.0, (0.0, 0.0)).integrate().unwrap();
    assert!((m - 1.0).abs() < 1e-8, "{m}");
}

#[test]
fn non_finite_fields_are_rejected() {
    let g = GridSpec::new(8, 1.0).unwrap();
    let mut v = vec![0.0; 64];
    v[3] = f64::NAN;
    let err = ScalarField::new(g, v).unwrap_err();
    assert!(err.to_string().contains("non-finite field"));
}

#[test]
fn lp_norms() {
    let g = GridSpec::new(64, 8.0).unwrap();
    let c = ScalarField::constant(g, 2.5);
    assert!((c.lp_norm(1.0).unwrap() - 2.5 * 64.0).abs() < 1e-10);
    assert!(matches!(c.lp_norm(0.5), Err(Error::InvalidExponent(_))));

    let g = GridSpec::new(256, 32.0).unwrap();
    let l2 = heat_kernel(g, 1.0, (0.0, 0.0)).lp_norm(2.0).unwrap();
    assert!((l2 - (8.0 * PI).powf(-0.5)).abs() < 1e-6, "{l2}");
}

#[test]
fn gradient_of_constant_and_single_mode() {
    let g = GridSpec::new(64, 10.0).unwrap();
    let (gx, gy) = gradient(&ScalarField::constant(g, 3.0)).unwrap();
    assert!(gx.sup_abs() < 1e-14 && gy.sup_abs() < 1e-14);

    let k = 2.0 * PI / 10.0;
    let (gx, gy) = gradient(&mode(g, 1.0)).unwrap();
    let exact = ScalarField::from_fn(g, |x, _| k * (k * x).cos());
    assert!(max_diff(&gx, &exact) < 1e-12);
    assert!(gy.sup_abs() < 1e-12);
}

#[test]
fn gradient_of_heat_kernel() {
    let g = GridSpec::new(256, 32.0).unwrap();
    let g1 = heat_kernel(g, 1.0, (0.0, 0.0));
    let (gx, gy) = gradient(&g1).unwrap();
    let ex = g1.map_xy(|x, _, v| -0.5 * x * v);
    let ey = g1.map_xy(|_, y, v| -0.5 * y * v);
    assert!(max_diff(&gx, &ex) < 1e-8);
    assert!(max_diff(&gy, &ey) < 1e-8);
}

#[test]
fn heat_propagate_identity_and_semigroup() {
    let g = GridSpec::new(128, 32.0).unwrap();
    let f = heat_kernel(g, 0.5, (0.3, -0.2));
    assert!(max_diff(&heat_propagate(&f, 0.0, 0.0).unwrap(), &f) < 1e-15);
    assert!(matches!(heat_propagate(&f, -1.0, 0.0), Err(Error::NegativeTime(_))));

    let moved = heat_propagate(&f, 1.5, 0.0).unwrap();
    let exact = heat_kernel(g, 2.0, (0.3, -0.2));
    assert!(max_diff(&moved, &exact) < 1e-10);
}

#[test]
fn divergence_cases() {
    let g = GridSpec::new(64, 10.0).unwrap();
    let c = ScalarField::constant(g, 1.5);
    assert!(divergence(&c, &c).unwrap().sup_abs() < 1e-14);

    let m = mode(g, 3.0);
    let (gx, gy) = gradient(&m).unwrap();
    let k2 = (2.0 * PI * 3.0 / 10.0).powi(2);
    assert!(max_diff(&divergence(&gx, &gy).unwrap(), &m.scale(-k2)) < 1e-11);
    assert!(max_diff(&laplacian(&m).unwrap(), &m.scale(-k2)) < 1e-11);

    let other = ScalarField::zeros(GridSpec::new(32, 10.0).unwrap());
    let err = divergence(&c, &other).unwrap_err();
    assert!(err.to_string().contains("incompatible grids"));
}

#[test]
fn gaussian_mass_and_center() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let u = gaussian(g, 4.0 * PI, 0.7, (1.0, -0.5));
    assert!((u.integrate().unwrap() - 4.0 * PI).abs() < 1e-10);
    let cx = u.map_xy(|x, _, v| x * v).integrate().unwrap() / (4.0 * PI);
    assert!((cx - 1.0).abs() < 1e-10);
}

fn random_field(n: usize) -> impl Strategy<Value = ScalarField> {
    prop::collection::vec(-1.0f64..1.0, n * n)
        .prop_map(move |v| ScalarField::new(GridSpec::new(n, 5.0).unwrap(), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(f in random_field(16)) {
        let c = SpectralCoeffs::from_field(&f);
        let direct = f.lp_norm(2.0).unwrap().powi(2);
        let spectral = 25.0 * c.energy();
        prop_assert!((direct - spectral).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn fft_round_trip(f in random_field(16)) {
        let back = SpectralCoeffs::from_field(&f).to_field();
        prop_assert!(max_diff(&back, &f) < 1e-14);
    }

    #[test]
    fn heat_flow_is_self_adjoint(f in random_field(16), h in random_field(16), t in 0.0f64..2.0) {
        let a = heat_propagate(&f, t, 0.3).unwrap().inner(&h).unwrap();
        let b = f.inner(&heat_propagate(&h, t, 0.3).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn heat_flow_keeps_mean_and_contracts_l2(f in random_field(16), t in 0.0f64..2.0) {
        let e = heat_propagate(&f, t, 0.0).unwrap();
        prop_assert!((e.integrate().unwrap() - f.integrate().unwrap()).abs() < 1e-12);
        prop_assert!(e.lp_norm(2.0).unwrap() <= f.lp_norm(2.0).unwrap() + 1e-12);
    }

    #[test]
    fn heat_semigroup(f in random_field(16), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let two = heat_propagate(&heat_propagate(&f, s, 0.2).unwrap(), t, 0.2).unwrap();
        let one = heat_propagate(&f, s + t, 0.2).unwrap();
        prop_assert!(max_diff(&two, &one) < 1e-13);
    }

    #[test]
    fn snapshot_round_trip(f in random_field(8), t in 0.0f64..100.0) {
        let (g, t2) = decode(&encode(&f, t)).unwrap();
        prop_assert_eq!(g, f);
        prop_assert_eq!(t2, t);
    }
}

#[test]
fn truncated_snapshot_is_rejected() {
    let f = ScalarField::zeros(GridSpec::new(8, 1.0).unwrap());
    let bytes = encode(&f, 0.0);
    assert!(matches!(decode(&bytes[..bytes.len() - 1]), Err(Error::Snapshot(_))));
}
