//! Grids, operator assembly and the lowest-eigenpair solver.

pub mod assembly;
pub mod grid;
pub mod lobpcg;
pub mod operator;

pub use assembly::{
    assemble_1d_schrodinger, assemble_2d_magnetic_schrodinger, assemble_half_line_neumann, NoField,
    VectorPotential, GAUGE_JUMP_TOL,
};
pub use grid::{BoundaryTag, Edge, Grid1D, Grid2D, HalfLineGrid};
pub use lobpcg::{lowest_eigenpair, lowest_eigenpair_with, EigenPair, Preconditioner, SolverOptions};
pub use operator::{SparseHermitianOp, HERMITIAN_RTOL};
