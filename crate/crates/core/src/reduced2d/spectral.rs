use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gauge::StepGauge;
use super::params::{potential_minimum_set, StepFieldParams};
use crate::context::{key, Context};
use crate::eigencore::{
    assemble_2d_magnetic_schrodinger, lowest_eigenpair_with, EigenPair, Grid2D, SparseHermitianOp,
};
use crate::error::{Error, Result};
use crate::fiber1d;
use crate::minimize::{argmin, golden, sample};

/// Width of the band along the artificial walls used for the wall mass.
pub const WALL_BAND: f64 = 3.0;
/// Largest admissible relative mass in the wall band.
pub const WALL_MASS_TOL: f64 = 1e-8;
/// Absolute guard added to every certification margin.
pub const GUARD: f64 = 1e-3;
/// Boundary hits of the minimum set further out than this are clipped.
const MAX_HIT: f64 = 200.0;

/// Lowest eigenvalue of the reduced operator at one `τ`, with its
/// essential threshold and error budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub tau: f64,
    pub sigma: f64,
    pub sigma_ess: f64,
    /// `sigma < sigma_ess - margin`.
    pub below_essential: bool,
    /// Kept only when `below_essential`.
    #[serde(skip)]
    pub eigenpair: Option<EigenPair>,
    pub residual: f64,
    /// `|σ(h) - σ(2h)| / 3`.
    pub mesh_error_estimate: f64,
    /// Upward shift attributable to the artificial walls; zero when the
    /// eigenfunction does not reach them.
    pub truncation_estimate: f64,
    pub wall_mass: f64,
    /// `residual + mesh_error_estimate + truncation_estimate + GUARD`.
    pub margin: f64,
    pub grid: Grid2D,
}

impl SpectralResult {
    /// Copy without the eigenvector.
    pub fn without_vector(&self) -> Self {
        Self { eigenpair: None, ..self.clone() }
    }
}

/// Truncation box: the hull of the origin and the boundary hits of the
/// potential's minimum set, enlarged by the box radius.
pub fn reduced_box(ctx: &Context, params: &StepFieldParams, tau: f64, h: f64) -> Result<Grid2D> {
    let res = ctx.resolution();
    let r = res.box_radius.max(10.0 / params.a.abs().sqrt());
    let hits = if params.gamma > 0.0 {
        potential_minimum_set(params, tau)?.boundary_hits(params)
    } else {
        vec![0.0]
    };
    let lo = hits.iter().fold(0.0f64, |m, &x| m.min(x)).max(-MAX_HIT);
    let hi = hits.iter().fold(0.0f64, |m, &x| m.max(x)).min(MAX_HIT);
    Grid2D::covering(lo - r, hi + r, r, h)
}

/// Reduced operator `-(∇ - iA)² + V_τ` on `grid`.
pub fn assemble_reduced(params: &StepFieldParams, tau: f64, grid: &Grid2D) -> Result<SparseHermitianOp> {
    let gauge = StepGauge::new(*params);
    let v = params.potential(tau);
    assemble_2d_magnetic_schrodinger(grid, &gauge, &v)
}

fn truncation_estimate(grid: &Grid2D, wall_mass: f64) -> f64 {
    if wall_mass <= WALL_MASS_TOL {
        0.0
    } else {
        let width = (grid.x1_hi - grid.x1_lo).min(2.0 * grid.x2_hi);
        (std::f64::consts::PI / width).powi(2)
    }
}

/// Fine and coarse solves at one `τ`; for `γ = 0` the potential is the
/// constant `τ²`, so only `τ = 0` is ever solved.
fn solve(ctx: &Context, params: &StepFieldParams, tau: f64) -> Result<Arc<SpectralResult>> {
    let k = [key(params.alpha), key(params.gamma), key(params.a), key(tau)];
    if let Some(r) = Context::cached(&ctx.sigma, &k) {
        return Ok(r);
    }
    let res = ctx.resolution();
    let grid = reduced_box(ctx, params, tau, res.h2d)?;
    let op = assemble_reduced(params, tau, &grid)?;
    let pair = lowest_eigenpair_with(&op, &res.solver())?;
    let coarse_grid = reduced_box(ctx, params, tau, 2.0 * res.h2d)?;
    let coarse = lowest_eigenpair_with(&assemble_reduced(params, tau, &coarse_grid)?, &res.solver())?.value;
    let wall_mass = grid.wall_mass(&pair.vector, WALL_BAND);
    let out = Arc::new(SpectralResult {
        tau,
        sigma: pair.value,
        sigma_ess: f64::NAN,
        below_essential: false,
        residual: pair.residual,
        mesh_error_estimate: (pair.value - coarse).abs() / 3.0,
        truncation_estimate: truncation_estimate(&grid, wall_mass),
        wall_mass,
        margin: f64::NAN,
        grid,
        eigenpair: Some(pair),
    });
    Context::store(&ctx.sigma, k, out.clone());
    Ok(out)
}

/// `σ(α, γ, a, τ)` with essential threshold and certification margin.
pub fn sigma(ctx: &Context, params: &StepFieldParams, tau: f64) -> Result<SpectralResult> {
    if !tau.is_finite() {
        return Err(Error::Range(format!("tau = {tau}")));
    }
    let mut r = if params.gamma == 0.0 {
        let base = solve(ctx, params, 0.0)?;
        let mut r = (*base).clone();
        r.tau = tau;
        r.sigma += tau * tau;
        r
    } else {
        (*solve(ctx, params, tau)?).clone()
    };
    r.sigma_ess = sigma_ess(ctx, params, tau)?;
    r.margin = r.residual + r.mesh_error_estimate + r.truncation_estimate + GUARD;
    r.below_essential = r.sigma < r.sigma_ess - r.margin;
    if !r.below_essential {
        r.eigenpair = None;
    }
    Ok(r)
}

/// `inf_ξ μ_a(τ sin γ + ξ cos γ) + (ξ sin γ - τ cos γ)²`, or `|a| Θ₀ + τ²`
/// for `γ = 0`, where the potential is the constant `τ²`.
pub fn sigma_ess(ctx: &Context, params: &StepFieldParams, tau: f64) -> Result<f64> {
    let a = params.a;
    if params.gamma == 0.0 {
        return Ok(a.abs() * fiber1d::theta0(ctx)?.value + tau * tau);
    }
    let (sg, cg) = params.gamma.sin_cos();
    if cg < 1e-12 {
        return fiber1d::mu(ctx, a, tau * sg);
    }
    let f = |xi: f64| -> Result<f64> { Ok(fiber1d::mu(ctx, a, tau * sg + xi * cg)? + (xi * sg - tau * cg).powi(2)) };
    // Outside |ξ - ξc| ≤ w the quadratic term alone exceeds f(ξc) - β_a.
    let xi_c = tau * cg / sg;
    let beta = fiber1d::beta(ctx, a)?.value;
    let w = ((f(xi_c)? - beta).max(0.0)).sqrt() / sg + 0.1;
    let n = ((2.0 * w / 0.1).ceil() as usize + 1).clamp(21, 401);
    let samples = sample(&f, xi_c - w, xi_c + w, n)?;
    let i = argmin(&samples);
    let lo = samples[i.saturating_sub(1)].0;
    let hi = samples[(i + 1).min(samples.len() - 1)].0;
    let (_, v) = golden(&f, lo, hi, 1e-7)?;
    Ok(v.min(samples[i].1))
}

/// A certified eigenfunction with the operator and grid it lives on.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub params: StepFieldParams,
    pub tau: f64,
    pub pair: EigenPair,
    pub grid: Grid2D,
    pub operator: SparseHermitianOp,
    pub sigma: f64,
    pub sigma_ess: f64,
    pub margin: f64,
}

/// Normalized eigenfunction at `τ`, provided `σ` is certified below the
/// essential threshold and the box contains the eigenfunction.
pub fn eigenfunction(ctx: &Context, params: &StepFieldParams, tau: f64) -> Result<Eigenstate> {
    let r = sigma(ctx, params, tau)?;
    let Some(pair) = r.eigenpair.filter(|_| r.below_essential) else {
        return Err(Error::NotBelowEssential { sigma: r.sigma, sigma_ess: r.sigma_ess, margin: r.margin });
    };
    if r.wall_mass > WALL_MASS_TOL {
        return Err(Error::GridTooSmall { wall_mass: r.wall_mass, threshold: WALL_MASS_TOL });
    }
    let operator = assemble_reduced(params, tau, &r.grid)?;
    let pair = EigenPair { value: r.sigma, ..pair };
    Ok(Eigenstate {
        params: *params,
        tau,
        pair,
        grid: r.grid,
        operator,
        sigma: r.sigma,
        sigma_ess: r.sigma_ess,
        margin: r.margin,
    })
}
