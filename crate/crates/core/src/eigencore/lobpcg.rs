//! Lowest eigenpair of a sparse Hermitian operator.
//!
//! Single-vector LOBPCG: each step performs Rayleigh–Ritz on the span of the
//! current iterate, the preconditioned residual and the previous search
//! direction. The default preconditioner is a sparse Cholesky factor of
//! `A - sI` with `s` below the spectrum; `s` is moved towards the current
//! Rayleigh quotient as the iteration converges, reusing the symbolic
//! factorization. A successful factorization at `s` also certifies that no
//! eigenvalue lies below `s`.

use faer::linalg::solvers::SolveCore;
use faer::sparse::linalg::solvers::{Llt, SymbolicLlt};
use faer::{Conj, Mat, MatMut, Side};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::operator::SparseHermitianOp;
use crate::error::{Error, Result};

/// Operators up to this size are solved densely.
const DENSE_LIMIT: usize = 64;
/// Refactorizations of the shifted operator per solve.
const MAX_REFACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preconditioner {
    Jacobi,
    ShiftedCholesky,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Bound on `‖Av - λv‖ / ‖v‖`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub preconditioner: Preconditioner,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 500, seed: 0x5eed, preconditioner: Preconditioner::ShiftedCholesky }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    /// Normalized in the discrete L² norm of the operator.
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Lowest eigenpair with default options apart from `tol` and `max_iter`.
pub fn lowest_eigenpair(op: &SparseHermitianOp, tol: f64, max_iter: usize) -> Result<EigenPair> {
    lowest_eigenpair_with(op, &SolverOptions { tol, max_iter, ..SolverOptions::default() })
}

pub fn lowest_eigenpair_with(op: &SparseHermitianOp, opts: &SolverOptions) -> Result<EigenPair> {
    if !(opts.tol > 0.0) {
        return Err(Error::Range(format!("solver tolerance {}", opts.tol)));
    }
    op.check_hermitian()?;
    let mut pair = if op.dim() <= DENSE_LIMIT { dense_lowest(op)? } else { lobpcg(op, opts)? };
    let scale = 1.0 / op.norm(&pair.vector);
    pair.vector.iter_mut().for_each(|v| *v *= scale);
    Ok(pair)
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn residual_of(op: &SparseHermitianOp, x: &[Complex64]) -> (f64, Vec<Complex64>, f64) {
    let ax = op.mul_vec(x);
    let nx = norm2(x);
    let rho = dot(x, &ax).re / (nx * nx);
    let r: Vec<Complex64> = ax.iter().zip(x).map(|(a, v)| a - rho * v).collect();
    let res = norm2(&r) / nx;
    (rho, r, res)
}

fn dense_lowest(op: &SparseHermitianOp) -> Result<EigenPair> {
    let n = op.dim();
    let mut m = Mat::<Complex64>::zeros(n, n);
    for (i, j, v) in op.entries() {
        m[(i, j)] = v;
    }
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Factorization(format!("dense eigensolver: {e:?}")))?;
    let u = eig.U();
    let vector: Vec<Complex64> = (0..n).map(|i| u[(i, 0)]).collect();
    let (value, _, residual) = residual_of(op, &vector);
    Ok(EigenPair { value, vector, residual, iterations: 0 })
}

enum Precond {
    Jacobi { inv_diag: Vec<f64> },
    Cholesky { symbolic: SymbolicLlt<usize>, llt: Llt<usize, Complex64>, shift: f64, refactors: usize },
}

impl Precond {
    fn new(op: &SparseHermitianOp, kind: Preconditioner) -> Result<Self> {
        let lower = op.gershgorin_lower_bound();
        let shift = lower - 1e-3 * (1.0 + lower.abs());
        match kind {
            Preconditioner::Jacobi => {
                let inv_diag = op.diagonal().iter().map(|d| 1.0 / (d - shift)).collect();
                Ok(Precond::Jacobi { inv_diag })
            }
            Preconditioner::ShiftedCholesky => {
                let mat = op.shifted_lower(shift)?;
                let symbolic = SymbolicLlt::try_new(mat.symbolic(), Side::Lower)
                    .map_err(|e| Error::Factorization(format!("{e:?}")))?;
                let llt = Llt::try_new_with_symbolic(symbolic.clone(), mat.as_ref(), Side::Lower)
                    .map_err(|e| Error::Factorization(format!("{e:?}")))?;
                Ok(Precond::Cholesky { symbolic, llt, shift, refactors: 0 })
            }
        }
    }

    fn apply(&self, r: &[Complex64]) -> Vec<Complex64> {
        match self {
            Precond::Jacobi { inv_diag } => r.iter().zip(inv_diag).map(|(v, d)| v * d).collect(),
            Precond::Cholesky { llt, .. } => {
                let mut w = r.to_vec();
                let n = w.len();
                llt.solve_in_place_with_conj(Conj::No, MatMut::from_column_major_slice_mut(&mut w, n, 1));
                w
            }
        }
    }

    /// Moves the shift up to `target` if `A - target I` is still positive
    /// definite; otherwise the current factor is kept.
    fn try_refactor(&mut self, op: &SparseHermitianOp, target: f64) {
        if let Precond::Cholesky { symbolic, llt, shift, refactors } = self {
            if *refactors >= MAX_REFACTOR || target <= *shift {
                return;
            }
            *refactors += 1;
            let Ok(mat) = op.shifted_lower(target) else { return };
            if let Ok(f) = Llt::try_new_with_symbolic(symbolic.clone(), mat.as_ref(), Side::Lower) {
                *llt = f;
                *shift = target;
            }
        }
    }

    fn shift(&self) -> Option<f64> {
        match self {
            Precond::Cholesky { shift, .. } => Some(*shift),
            Precond::Jacobi { .. } => None,
        }
    }
}

/// Orthonormalizes `vs` in place (two passes of classical Gram–Schmidt),
/// dropping vectors that are numerically dependent. Returns the indices kept.
fn orthonormalize(vs: &mut Vec<Vec<Complex64>>) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for (idx, mut v) in std::mem::take(vs).into_iter().enumerate() {
        let before = norm2(&v);
        if !(before > 0.0) || !before.is_finite() {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                axpy(-c, q, &mut v);
            }
        }
        let after = norm2(&v);
        if after > 1e-10 * before {
            v.iter_mut().for_each(|x| *x /= after);
            out.push(v);
            kept.push(idx);
        }
    }
    *vs = out;
    kept
}

fn lobpcg(op: &SparseHermitianOp, opts: &SolverOptions) -> Result<EigenPair> {
    let n = op.dim();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut precond = Precond::new(op, opts.preconditioner)?;

    let start: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let mut x = precond.apply(&start);
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut p: Option<Vec<Complex64>> = None;

    let mut best = f64::INFINITY;
    let mut res_at_factor = f64::INFINITY;
    for iter in 0..=opts.max_iter {
        let (rho, r, res) = residual_of(op, &x);
        best = best.min(res);
        if res <= opts.tol {
            return Ok(EigenPair { value: rho, vector: x, residual: res, iterations: iter });
        }
        if iter == opts.max_iter {
            break;
        }
        if let Some(s) = precond.shift() {
            if res < 1e-2 * res_at_factor && rho - s > 4.0 * res {
                precond.try_refactor(op, rho - 2.0 * res.max(1e-8 * (1.0 + rho.abs())));
                res_at_factor = res;
            } else if res_at_factor.is_infinite() {
                res_at_factor = res;
            }
        }

        let w = precond.apply(&r);
        let mut basis = vec![x.clone(), w];
        if let Some(pv) = p.take() {
            basis.push(pv);
        }
        orthonormalize(&mut basis);
        let images: Vec<Vec<Complex64>> = basis.iter().map(|b| op.mul_vec(b)).collect();
        let m = basis.len();
        let mut h = Mat::<Complex64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                h[(i, j)] = dot(&basis[i], &images[j]);
            }
        }
        for i in 0..m {
            for j in 0..i {
                let avg = 0.5 * (h[(i, j)] + h[(j, i)].conj());
                h[(i, j)] = avg;
                h[(j, i)] = avg.conj();
            }
            h[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        }
        let eig = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Factorization(format!("Rayleigh–Ritz: {e:?}")))?;
        let y: Vec<Complex64> = (0..m).map(|i| eig.U()[(i, 0)]).collect();

        let mut x_new = vec![zero(); n];
        let mut p_new = vec![zero(); n];
        for (k, b) in basis.iter().enumerate() {
            axpy(y[k], b, &mut x_new);
            if k > 0 {
                axpy(y[k], b, &mut p_new);
            }
        }
        let nxn = norm2(&x_new);
        x_new.iter_mut().for_each(|v| *v /= nxn);
        x = x_new;
        p = (norm2(&p_new) > 0.0).then_some(p_new);
    }
    Err(Error::NonConvergence { iterations: opts.max_iter, best_residual: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigencore::assembly::assemble_1d_schrodinger;
    use crate::eigencore::grid::Grid1D;

    #[test]
    fn diagonal_operator() {
        let op = SparseHermitianOp::diagonal_op(&[1.0, 2.0, 3.0]).unwrap();
        let pair = lowest_eigenpair(&op, 1e-12, 10).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-14);
        assert!((pair.vector[0].norm() - 1.0).abs() < 1e-12);
        assert!(pair.vector[1].norm() < 1e-12 && pair.vector[2].norm() < 1e-12);
    }

    #[test]
    fn identity() {
        let op = SparseHermitianOp::diagonal_op(&[1.0; 10]).unwrap();
        let pair = lowest_eigenpair(&op, 1e-12, 10).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_diagonal_uses_iteration() {
        let d: Vec<f64> = (0..500).map(|i| 3.0 + i as f64 * 0.01).collect();
        for preconditioner in [Preconditioner::Jacobi, Preconditioner::ShiftedCholesky] {
            let op = SparseHermitianOp::diagonal_op(&d).unwrap();
            let opts = SolverOptions { tol: 1e-10, max_iter: 500, preconditioner, ..Default::default() };
            let pair = lowest_eigenpair_with(&op, &opts).unwrap();
            assert!((pair.value - 3.0).abs() < 1e-12, "{preconditioner:?}: {}", pair.value);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let g = Grid1D::new(-12.0, 12.0, 2001).unwrap();
        let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
        let pair = lowest_eigenpair(&op, 1e-9, 200).unwrap();
        // Leading discretization error of the three-point stencil is -h²/16.
        let h = g.spacing();
        assert!((pair.value - (1.0 - h * h / 16.0)).abs() < 1e-8, "{}", pair.value);
        assert!(pair.residual <= 1e-9);
        assert!((op.norm(&pair.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_matches_cholesky_on_small_oscillator() {
        let g = Grid1D::new(-8.0, 8.0, 161).unwrap();
        let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
        let chol = lowest_eigenpair(&op, 1e-9, 200).unwrap();
        let opts = SolverOptions { preconditioner: Preconditioner::Jacobi, max_iter: 5000, ..Default::default() };
        let jac = lowest_eigenpair_with(&op, &opts).unwrap();
        assert!((chol.value - jac.value).abs() < 1e-10);
    }

    #[test]
    fn deterministic() {
        let g = Grid1D::new(-8.0, 8.0, 401).unwrap();
        let op = assemble_1d_schrodinger(&g, |t| t * t + t).unwrap();
        let a = lowest_eigenpair(&op, 1e-9, 200).unwrap();
        let b = lowest_eigenpair(&op, 1e-9, 200).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_convergence_reported() {
        let g = Grid1D::new(-8.0, 8.0, 401).unwrap();
        let op = assemble_1d_schrodinger(&g, |t| t * t).unwrap();
        let err = lowest_eigenpair(&op, 1e-14, 1).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 1, .. }));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let op = SparseHermitianOp::diagonal_op(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(lowest_eigenpair(&op, 0.0, 10), Err(Error::Range(_))));
    }
}
