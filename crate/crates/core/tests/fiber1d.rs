mod support;

use magstep::fiber1d::*;
use magstep::{Error, Resolution};
use proptest::prelude::*;
use support::ctx;

fn richardson(fine: f64, coarse: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

#[test]
fn unit_field_fiber_is_the_oscillator() {
    let res = Resolution::default();
    let coarse = res.scaled(2.0);
    for xi in [-2.0, 0.0, 1.3] {
        let v = richardson(mu_at(&res, 1.0, xi).unwrap(), mu_at(&coarse, 1.0, xi).unwrap());
        assert!((v - 1.0).abs() < 1e-6, "xi = {xi}: {v}");
    }
}

#[test]
fn neumann_half_line_at_zero() {
    let res = Resolution::default();
    let v = richardson(mu_neumann_at(&res, 0.0).unwrap(), mu_neumann_at(&res.scaled(2.0), 0.0).unwrap());
    assert!((v - 1.0).abs() < 1e-6, "{v}");
}

#[test]
fn antisymmetric_step_reduces_to_neumann() {
    let a = mu(ctx(), -1.0, 0.7681).unwrap();
    let n = mu_neumann(ctx(), 0.7681).unwrap();
    assert!((a - n).abs() < 1e-6, "{a} vs {n}");
}

#[test]
fn wells_far_out() {
    assert!((mu(ctx(), 0.5, 8.0).unwrap() - 1.0).abs() < 2e-2);
    assert!((mu_neumann(ctx(), 8.0).unwrap() - 1.0).abs() < 2e-2);
}

#[test]
fn de_gennes_constant() {
    let t = theta0(ctx()).unwrap();
    assert!((t.value - 0.5901061).abs() < 5e-4);
    assert!(t.value >= 0.590106124 - t.mesh_error);
    assert!((t.richardson - 0.5901061).abs() < 5e-5);
    assert!((t.coarse_value - t.value).abs() <= 4.0 * t.mesh_error.max(1e-12) * 4.0);
    assert!(t.xi_min > 0.7 && t.xi_min < 0.85);
}

#[test]
fn beta_examples() {
    let b = beta(ctx(), 0.5).unwrap();
    assert!((b.value - 0.5).abs() < 2e-3 && b.xi_star.is_none() && b.certified);
    let theta0 = theta0(ctx()).unwrap().value;
    let b = beta(ctx(), -1.0).unwrap();
    assert!((b.value - theta0).abs() < 1e-3);
    assert!(b.xi_star.is_some_and(|x| x > 0.0 && x.is_finite()));
    let b = beta(ctx(), -0.5).unwrap();
    assert!(b.value >= 0.5 * theta0 - 1e-3 && b.value < 0.5);
}

#[test]
fn positive_a_infimum_not_attained() {
    let xs: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
    let curve = sample_curve(ctx(), 0.25, &xs).unwrap();
    let mesh_tol = 1e-4;
    assert!(curve.samples.iter().all(|&(_, m)| m >= 0.25 - mesh_tol));
    let narrow = curve.samples.iter().filter(|p| p.0.abs() <= 2.0).map(|p| p.1).fold(f64::INFINITY, f64::min);
    let wide = curve.samples.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    assert!(wide <= narrow);
}

#[test]
fn window_independence() {
    let res = Resolution::default();
    for (a, xi) in [(-0.5, 0.6), (0.5, -1.0), (-1.0, 2.0)] {
        let v1 = mu_with_window(&res, a, xi, 1.0).unwrap();
        let v2 = mu_with_window(&res, a, xi, 1.5).unwrap();
        assert!((v1 - v2).abs() < 1e-8, "a = {a}, xi = {xi}: {v1} vs {v2}");
    }
}

#[test]
fn parameter_validation() {
    assert!(matches!(mu(ctx(), 0.0, 1.0), Err(Error::Range(_))));
    assert!(matches!(beta(ctx(), 1.0), Err(Error::Range(_))));
    assert!(mu(ctx(), 1.0, 0.0).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn band_function_positive(a in -1.0f64..1.0, xi in -4.0f64..4.0) {
        prop_assume!(a.abs() > 0.05);
        prop_assert!(mu(ctx(), a, xi).unwrap() > 0.0);
    }

    #[test]
    fn antisymmetric_step_matches_neumann(xi in -1.0f64..3.0) {
        let a = mu(ctx(), -1.0, xi).unwrap();
        let n = mu_neumann(ctx(), xi).unwrap();
        prop_assert!((a - n).abs() < 1e-8);
    }

    #[test]
    fn negative_a_bounds(i in 0usize..3) {
        let a = [-0.25, -0.5, -0.75][i];
        let theta0 = theta0(ctx()).unwrap().value;
        let b = beta(ctx(), a).unwrap().value;
        prop_assert!(b >= a.abs() * theta0 - 1e-3 && b < a.abs());
    }
}
