mod support;

use magstep::eigencore::*;
use magstep::{fiber1d, Error};
use num_complex::Complex64;
use proptest::prelude::*;

fn oscillator(n: usize) -> f64 {
    let g = Grid1D::new(-12.0, 12.0, n).unwrap();
    let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
    lowest_eigenpair(&op, 1e-10, 500).unwrap().value
}

#[test]
fn diagonal_and_identity() {
    let op = SparseHermitianOp::diagonal_op(&[1.0, 2.0, 3.0]).unwrap();
    let p = lowest_eigenpair(&op, 1e-12, 100).unwrap();
    assert!((p.value - 1.0).abs() < 1e-12);
    assert!((p.vector[0].norm() - 1.0).abs() < 1e-10);
    let id = SparseHermitianOp::diagonal_op(&[1.0; 10]).unwrap();
    assert!((lowest_eigenpair(&id, 1e-12, 100).unwrap().value - 1.0).abs() < 1e-12);
}

#[test]
fn oscillator_ground_level() {
    // Plain central differences sit h²/16 below the exact level; one
    // Richardson step against the mesh twice as coarse recovers it.
    let fine = oscillator(2001);
    let h = 24.0 / 2000.0;
    assert!((fine - (1.0 - h * h / 16.0)).abs() < 1e-8, "fine = {fine}");
    let coarse = oscillator(1001);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    assert!((extrapolated - 1.0).abs() < 1e-6, "extrapolated = {extrapolated}");
}

#[test]
fn oscillator_mesh_order() {
    let errs: Vec<f64> = [501, 1001, 2001].iter().map(|&n| (oscillator(n) - 1.0).abs()).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "observed order {order}");
    }
}

#[test]
fn eigenpair_is_normalized_with_small_residual() {
    let g = Grid1D::new(-12.0, 12.0, 801).unwrap();
    let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
    let p = lowest_eigenpair(&op, 1e-9, 500).unwrap();
    assert!((op.norm(&p.vector) - 1.0).abs() < 1e-12);
    assert!(p.residual <= 1e-9);
}

#[test]
fn stencil_examples() {
    let g = Grid1D::new(0.0, 1.0, 3).unwrap();
    let h = g.spacing();
    let op = assemble_1d_schrodinger(&g, |_| 0.0).unwrap();
    assert!((op.get(1, 1).re - 2.0 / (h * h)).abs() < 1e-12);
    assert!((op.get(0, 1).re + 1.0 / (h * h)).abs() < 1e-12);
    let xi = 0.5;
    let op = assemble_1d_schrodinger(&g, |t| (t - xi).powi(2)).unwrap();
    assert!((op.get(1, 1).re - 2.0 / (h * h)).abs() < 1e-12);
}

#[test]
fn grid1d_rejects_too_few_nodes() {
    assert!(Grid1D::new(0.0, 1.0, 2).is_err());
    assert!(Grid1D::new(1.0, 0.0, 5).is_err());
}

#[test]
fn two_d_laplacian_and_constant_shift() {
    let grid = Grid2D::with_spacing(-2.0, 2.0, 2.0, 0.5).unwrap();
    let lap = assemble_2d_magnetic_schrodinger(&grid, &NoField, &|_| 0.0).unwrap();
    let shifted = assemble_2d_magnetic_schrodinger(&grid, &NoField, &|_| 0.7).unwrap();
    for (i, j, v) in lap.entries() {
        assert_eq!(v.im, 0.0);
        let w = shifted.get(i, j);
        let want = if i == j { v.re + 0.7 } else { v.re };
        assert!((w.re - want).abs() < 1e-12 && w.im == 0.0);
    }
}

#[test]
fn unit_field_half_plane_gives_de_gennes() {
    let theta0 = fiber1d::theta0(support::ctx()).unwrap().value;
    let grid = Grid2D::with_spacing(-15.0, 15.0, 15.0, 0.2).unwrap();
    let gauge = |x: [f64; 2]| [0.0, x[0]];
    let op = assemble_2d_magnetic_schrodinger(&grid, &gauge, &|_| 0.0).unwrap();
    let value = lowest_eigenpair(&op, 1e-9, 500).unwrap().value;
    assert!((value - theta0).abs() < 5e-3, "value = {value}, theta0 = {theta0}");
}

#[test]
fn domain_growth_never_raises_the_ground_level() {
    let gauge = |x: [f64; 2]| [0.0, x[0]];
    let mut last = f64::INFINITY;
    for half in [3.0, 4.0, 6.0] {
        let grid = Grid2D::with_spacing(-half, half, half, 0.25).unwrap();
        let op = assemble_2d_magnetic_schrodinger(&grid, &gauge, &|_| 0.0).unwrap();
        let v = lowest_eigenpair(&op, 1e-10, 500).unwrap().value;
        assert!(v <= last + 1e-9);
        last = v;
    }
}

struct Jumping;

impl VectorPotential for Jumping {
    fn value(&self, x: [f64; 2]) -> [f64; 2] {
        [0.0, if x[0] > 0.0 { 1.0 } else { 0.0 }]
    }

    fn interface_jump(&self, p: [f64; 2], q: [f64; 2]) -> Option<(f64, [f64; 2])> {
        (p[0] * q[0] < 0.0).then_some((1.0, [0.0, p[1]]))
    }
}

#[test]
fn gauge_jump_is_rejected() {
    let grid = Grid2D::with_spacing(-1.05, 0.95, 1.0, 0.1).unwrap();
    let r = assemble_2d_magnetic_schrodinger(&grid, &Jumping, &|_| 0.0);
    assert!(matches!(r, Err(Error::GaugeDiscontinuity { .. })));
}

#[test]
fn solver_errors() {
    let entries = vec![(0, 1, Complex64::new(1.0, 0.0)), (1, 0, Complex64::new(2.0, 0.0))];
    assert!(matches!(SparseHermitianOp::from_entries(2, entries, 1.0), Err(Error::NotHermitian { .. })));
    let g = Grid1D::new(-12.0, 12.0, 2001).unwrap();
    let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
    assert!(matches!(lowest_eigenpair(&op, 1e-12, 1), Err(Error::NonConvergence { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn assembled_operators_are_hermitian(b1 in -2.0f64..2.0, b2 in -2.0f64..2.0, c in 0.0f64..3.0) {
        let grid = Grid2D::with_spacing(-2.0, 2.0, 2.0, 0.4).unwrap();
        let gauge = move |x: [f64; 2]| [b1 * x[1], b2 * x[0]];
        let op = assemble_2d_magnetic_schrodinger(&grid, &gauge, &move |x| c * x[0] * x[0]).unwrap();
        for (i, j, v) in op.entries() {
            prop_assert!((op.get(j, i) - v.conj()).norm() <= 1e-14 * v.norm().max(1.0));
        }
    }

    #[test]
    fn gauge_covariance(k1 in -1.0f64..1.0, k2 in -1.0f64..1.0, seed in 0u64..1000) {
        // A → A + ∇φ with φ = k1 x1² + k2 x1 x2 and u → e^{iφ} u leave Q invariant.
        let grid = Grid2D::with_spacing(-2.0, 2.0, 2.0, 0.25).unwrap();
        let base = |x: [f64; 2]| [0.0, x[0]];
        let shifted = move |x: [f64; 2]| [2.0 * k1 * x[0] + k2 * x[1], x[0] + k2 * x[0]];
        let op0 = assemble_2d_magnetic_schrodinger(&grid, &base, &|_| 0.0).unwrap();
        let op1 = assemble_2d_magnetic_schrodinger(&grid, &shifted, &|_| 0.0).unwrap();
        let u: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let t = ((k as u64).wrapping_mul(2654435761).wrapping_add(seed) % 1000) as f64 / 1000.0;
                Complex64::new(t - 0.5, 0.3 * t)
            })
            .collect();
        let v: Vec<Complex64> = u
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let [x1, x2] = grid.point(k);
                z * Complex64::from_polar(1.0, k1 * x1 * x1 + k2 * x1 * x2)
            })
            .collect();
        let (q0, q1) = (op0.quadratic_form(&u), op1.quadratic_form(&v));
        prop_assert!((q0 - q1).abs() <= 1e-10 * q0.abs().max(1.0));
    }
}
