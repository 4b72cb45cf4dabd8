use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform node set on `[lo, hi]`.
///
/// Every node is an unknown; the homogeneous Dirichlet condition is imposed
/// on the virtual nodes `lo - h` and `hi + h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidGrid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    /// Grid whose nodes are the integer multiples `i * h` for `i` in
    /// `[i_lo, i_hi]`. Anchoring at the origin keeps node positions fixed
    /// when a window is enlarged.
    pub fn anchored(i_lo: i64, i_hi: i64, h: f64) -> Result<Self> {
        if i_hi - i_lo < 2 {
            return Err(Error::InvalidGrid(format!("index range [{i_lo}, {i_hi}] too short")));
        }
        Self::new(i_lo as f64 * h, i_hi as f64 * h, (i_hi - i_lo + 1) as usize)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }
}

/// Nodes `i h`, `i = 0..n`, on the half-line `[0, length)`.
///
/// The Neumann condition at 0 uses the mirrored ghost node `u(-h) = u(h)`,
/// which makes the discrete problem the even restriction of the symmetric
/// line problem; the far end carries a Dirichlet virtual node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLineGrid {
    h: f64,
    n: usize,
}

impl HalfLineGrid {
    pub fn new(length: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(length > 2.0 * h) {
            return Err(Error::InvalidGrid(format!("half-line length {length} with spacing {h}")));
        }
        Ok(Self { h, n: (length / h).round() as usize })
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryTag {
    Neumann,
    ArtificialDirichlet,
}

/// Edge order used by [`Grid2D::boundary_tags`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Bottom = 0,
    Right = 1,
    Top = 2,
    Left = 3,
}

/// Rectangular truncation of the half-plane `{x2 > 0}`.
///
/// Nodes in `x1` include both endpoints (Dirichlet virtual nodes one step
/// outside). Nodes in `x2` are cell-centred, `x2_j = (j + 1/2) h2`, so the
/// physical boundary `x2 = 0` sits half a cell below the first row and the
/// top row lands on `x2_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x1_lo: f64,
    pub x1_hi: f64,
    pub x2_lo: f64,
    pub x2_hi: f64,
    pub n1: usize,
    pub n2: usize,
    pub boundary_tags: [BoundaryTag; 4],
}

impl Grid2D {
    pub fn new(x1_lo: f64, x1_hi: f64, x2_hi: f64, n1: usize, n2: usize) -> Result<Self> {
        if !(x1_lo < x1_hi) || !(x2_hi > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box [{x1_lo}, {x1_hi}] x [0, {x2_hi}] is empty"
            )));
        }
        if n1 < 3 || n2 < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3x3 nodes, got {n1}x{n2}")));
        }
        Ok(Self {
            x1_lo,
            x1_hi,
            x2_lo: 0.0,
            x2_hi,
            n1,
            n2,
            boundary_tags: [
                BoundaryTag::Neumann,
                BoundaryTag::ArtificialDirichlet,
                BoundaryTag::ArtificialDirichlet,
                BoundaryTag::ArtificialDirichlet,
            ],
        })
    }

    /// Box with spacing as close as possible to `h` in both directions.
    pub fn with_spacing(x1_lo: f64, x1_hi: f64, x2_hi: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {h}")));
        }
        let n1 = ((x1_hi - x1_lo) / h).round() as usize + 1;
        let n2 = (x2_hi / h + 0.5).round() as usize;
        Self::new(x1_lo, x1_hi, x2_hi, n1, n2)
    }

    /// Smallest grid with spacing exactly `h` whose box contains the given one.
    pub fn covering(x1_lo: f64, x1_hi: f64, x2_hi: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {h}")));
        }
        let lo = (x1_lo / h).floor();
        let hi = (x1_hi / h).ceil();
        let n2 = (x2_hi / h + 0.5).ceil();
        Self::new(lo * h, hi * h, (n2 - 0.5) * h, (hi - lo) as usize + 1, n2 as usize)
    }

    pub fn h1(&self) -> f64 {
        (self.x1_hi - self.x1_lo) / (self.n1 - 1) as f64
    }

    pub fn h2(&self) -> f64 {
        self.x2_hi / (self.n2 as f64 - 0.5)
    }

    pub fn cell_area(&self) -> f64 {
        self.h1() * self.h2()
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.x1_lo + i as f64 * self.h1()
    }

    pub fn x2(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.h2()
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        [self.x1(k % self.n1), self.x2(k / self.n1)]
    }

    pub fn tag(&self, edge: Edge) -> BoundaryTag {
        self.boundary_tags[edge as usize]
    }

    /// Distance from a node to the nearest artificial (Dirichlet) wall.
    pub fn wall_distance(&self, p: [f64; 2]) -> f64 {
        let left = p[0] - self.x1_lo;
        let right = self.x1_hi - p[0];
        let top = self.x2_hi - p[1];
        left.min(right).min(top)
    }

    /// Radius of the largest half-disc centred at the origin that fits in
    /// the box.
    pub fn inscribed_radius(&self) -> f64 {
        (-self.x1_lo).min(self.x1_hi).min(self.x2_hi).max(0.0)
    }

    /// Discrete L² mass of `v` on nodes closer than `within` to an
    /// artificial wall, relative to the total mass.
    pub fn wall_mass(&self, v: &[Complex64], within: f64) -> f64 {
        let (mut near, mut total) = (0.0, 0.0);
        for (k, x) in v.iter().enumerate() {
            let m = x.norm_sqr();
            total += m;
            if self.wall_distance(self.point(k)) < within {
                near += m;
            }
        }
        if total > 0.0 { near / total } else { 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid1d_spacing_and_nodes() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn grid1d_rejects_bad_input() {
        assert!(Grid1D::new(1.0, 1.0, 5).is_err());
        assert!(Grid1D::new(0.0, 1.0, 2).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 5).is_err());
    }

    #[test]
    fn anchored_grid_hits_origin() {
        let g = Grid1D::anchored(-7, 11, 0.25).unwrap();
        assert_eq!(g.node(7), 0.0);
        assert_eq!(g.len(), 19);
    }

    #[test]
    fn covering_grid_keeps_exact_spacing() {
        let g = Grid2D::covering(-3.3, 7.1, 4.9, 0.2).unwrap();
        assert!((g.h1() - 0.2).abs() < 1e-12 && (g.h2() - 0.2).abs() < 1e-12);
        assert!(g.x1_lo <= -3.3 && g.x1_hi >= 7.1 && g.x2_hi >= 4.9);
    }

    #[test]
    fn grid2d_layout() {
        let g = Grid2D::with_spacing(-2.0, 2.0, 3.0, 0.5).unwrap();
        assert_eq!(g.n1, 9);
        assert!((g.x2(g.n2 - 1) - 3.0).abs() < 1e-12);
        assert!((g.x2(0) - 0.5 * g.h2()).abs() < 1e-15);
        assert_eq!(g.tag(Edge::Bottom), BoundaryTag::Neumann);
        assert_eq!(g.tag(Edge::Top), BoundaryTag::ArtificialDirichlet);
        assert_eq!(g.x2_lo, 0.0);
        let k = g.index(3, 2);
        assert_eq!(g.point(k), [g.x1(3), g.x2(2)]);
    }
}
