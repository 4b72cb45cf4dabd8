use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance of the conjugate-symmetry check.
pub const HERMITIAN_RTOL: f64 = 1e-14;

/// Sparse Hermitian matrix in compressed-row form.
///
/// `measure` is the quadrature weight of one node (cell area in 2D, spacing
/// in 1D); it defines the discrete L² inner product `measure * sum(conj(u) v)`
/// in which eigenvectors are normalized.
#[derive(Debug, Clone)]
pub struct SparseHermitianOp {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    measure: f64,
}

impl SparseHermitianOp {
    /// Builds the operator from `(row, col, value)` entries, summing
    /// duplicates, and verifies Hermitian symmetry.
    pub fn from_entries(
        dim: usize,
        mut entries: Vec<(usize, usize, Complex64)>,
        measure: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("operator of dimension 0".into()));
        }
        if !(measure > 0.0) {
            return Err(Error::InvalidGrid(format!("node measure {measure}")));
        }
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::InvalidGrid(format!("entry ({r}, {c}) outside dimension {dim}")));
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let op = Self { dim, row_ptr, cols, vals, measure };
        op.check_hermitian()?;
        Ok(op)
    }

    /// Real diagonal operator, mostly useful for tests.
    pub fn diagonal_op(diag: &[f64]) -> Result<Self> {
        let entries = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, Complex64::new(d, 0.0)))
            .collect();
        Self::from_entries(diag.len(), entries, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&j) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let scale = self.vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
        for (i, j, v) in self.entries() {
            let mismatch = if i == j { v.im.abs() } else { (v - self.get(j, i).conj()).norm() };
            if mismatch > HERMITIAN_RTOL * scale {
                return Err(Error::NotHermitian { row: i, col: j, mismatch: mismatch / scale });
            }
        }
        Ok(())
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(x, &mut y);
        y
    }

    /// Discrete inner product `measure * sum(conj(x) y)`.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.measure
    }

    pub fn norm(&self, x: &[Complex64]) -> f64 {
        self.inner(x, x).re.sqrt()
    }

    /// Quadratic form `<x, A x>` in the discrete L² product.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        self.inner(x, &self.mul_vec(x)).re
    }

    /// Gershgorin lower bound on the spectrum.
    pub fn gershgorin_lower_bound(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let mut diag = 0.0;
                let mut off = 0.0;
                for (j, v) in self.row(i) {
                    if j == i {
                        diag = v.re;
                    } else {
                        off += v.norm();
                    }
                }
                diag - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Lower triangle of `A - shift I` as a faer matrix.
    pub(crate) fn shifted_lower(&self, shift: f64) -> Result<SparseColMat<usize, Complex64>> {
        let mut triplets = Vec::with_capacity(self.nnz() / 2 + self.dim);
        for i in 0..self.dim {
            triplets.push(Triplet::new(i, i, self.get(i, i) - shift));
            for (j, v) in self.row(i).filter(|&(j, _)| j < i) {
                triplets.push(Triplet::new(i, j, v));
            }
        }
        SparseColMat::try_new_from_triplets(self.dim, self.dim, &triplets)
            .map_err(|e| Error::Factorization(format!("{e:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed() {
        let op = SparseHermitianOp::from_entries(
            2,
            vec![(0, 0, c(1.0, 0.0)), (0, 0, c(2.0, 0.0)), (1, 1, c(1.0, 0.0))],
            1.0,
        )
        .unwrap();
        assert_eq!(op.get(0, 0), c(3.0, 0.0));
        assert_eq!(op.nnz(), 2);
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = SparseHermitianOp::from_entries(
            2,
            vec![(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, 1.0)), (0, 0, c(1.0, 0.0))],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn rejects_complex_diagonal() {
        let err = SparseHermitianOp::from_entries(1, vec![(0, 0, c(1.0, 1e-3))], 1.0).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn matvec_and_forms() {
        let op = SparseHermitianOp::from_entries(
            2,
            vec![(0, 0, c(2.0, 0.0)), (0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0)), (1, 1, c(2.0, 0.0))],
            0.5,
        )
        .unwrap();
        let x = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let y = op.mul_vec(&x);
        assert_eq!(y, vec![c(1.0, 0.0), c(0.0, 1.0)]);
        assert!((op.quadratic_form(&x) - 1.0).abs() < 1e-15);
        assert!((op.norm(&x) - 1.0).abs() < 1e-15);
        assert_eq!(op.gershgorin_lower_bound(), 1.0);
    }
}
