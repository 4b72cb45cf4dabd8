//! One-dimensional fiber operators and the constants derived from them.
//!
//! `h_a[ξ] = -d²/dt² + (s(t) t - ξ)²` on the line, with `s = a` for `t < 0`
//! and `s = 1` for `t > 0`; `μ_a(ξ)` is its lowest eigenvalue and
//! `β_a = inf_ξ μ_a(ξ)`. The de Gennes model is the half-line problem
//! `-d²/dt² + (t - ξ)²` on `(0, ∞)` with a Neumann condition at 0, whose
//! band minimum is `Θ₀`.

use serde::{Deserialize, Serialize};

use crate::context::{key, Context, Resolution};
use crate::eigencore::{
    assemble_1d_schrodinger, assemble_half_line_neumann, lowest_eigenpair_with, Grid1D, HalfLineGrid,
};
use crate::error::{Error, Result};
use crate::minimize::{argmin, sample, scan_then_golden};

/// Potential level (above its minimum) beyond which the line is truncated.
const WALL_LEVEL: f64 = 144.0;
/// Step of the coarse ξ scans.
pub const SCAN_STEP: f64 = 0.05;
/// Golden-section tolerance in ξ.
pub const XI_TOL: f64 = 1e-8;
/// Slack allowed below `a` in the `β_a = a` certificate for `0 < a < 1`.
pub const BETA_CERT_TOL: f64 = 1e-4;

/// `(a, ξ)` for one fiber operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    pub a: f64,
    pub xi: f64,
}

impl FiberParams {
    /// Accepts `a ∈ [-1, 1] \ {0}`; `a = 1` is the whole-line oscillator
    /// and is only meant for sanity checks.
    pub fn new(a: f64, xi: f64) -> Result<Self> {
        check_a(a, true)?;
        if !xi.is_finite() {
            return Err(Error::Range(format!("xi = {xi}")));
        }
        Ok(Self { a, xi })
    }
}

pub(crate) fn check_a(a: f64, allow_one: bool) -> Result<()> {
    let upper_ok = if allow_one { a <= 1.0 } else { a < 1.0 };
    if a.is_finite() && a >= -1.0 && upper_ok && a != 0.0 {
        Ok(())
    } else {
        Err(Error::Range(format!("a = {a} outside [-1, 1) \\ {{0}}")))
    }
}

/// Sampled band function with optional minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberCurve {
    pub a: f64,
    pub samples: Vec<(f64, f64)>,
    pub minimizer: Option<(f64, f64)>,
    pub refinement_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theta0 {
    pub value: f64,
    pub xi_min: f64,
    /// Same minimization on a mesh twice as coarse.
    pub coarse_value: f64,
    /// One Richardson step from the two meshes.
    pub richardson: f64,
    /// `|value - richardson|`.
    pub mesh_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beta {
    pub a: f64,
    pub value: f64,
    /// Unique minimizer `ξ_a` for `a < 0`; absent for `a > 0`, where the
    /// infimum is only approached as `ξ → -∞`.
    pub xi_star: Option<f64>,
    /// Smallest `μ_a` on the coarse scan.
    pub scan_min: f64,
    /// For `a > 0`: the scan stays above `a - BETA_CERT_TOL`.
    pub certified: bool,
}

fn potential(a: f64, xi: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        let s = if t < 0.0 { a } else { 1.0 };
        (s * t - xi).powi(2)
    }
}

/// Truncation window of `h_a[ξ]`: the hull of the origin and the set where
/// the potential is below `max(WALL_LEVEL, min V + WALL_LEVEL)`.
pub fn mu_window(a: f64, xi: f64) -> (f64, f64) {
    let min_v = if xi >= 0.0 || a > 0.0 { 0.0 } else { xi * xi };
    let r = (min_v + WALL_LEVEL).sqrt();
    let hi = (xi + r).max(0.0);
    let (p, q) = ((xi - r) / a, (xi + r) / a);
    let lo = p.min(q).min(0.0);
    (lo, hi)
}

/// `μ_a(ξ)` at the given resolution, on the default window stretched by
/// `window_scale` about the origin.
pub fn mu_with_window(res: &Resolution, a: f64, xi: f64, window_scale: f64) -> Result<f64> {
    let p = FiberParams::new(a, xi)?;
    if !(window_scale >= 1.0) {
        return Err(Error::Range(format!("window scale {window_scale}")));
    }
    let (lo, hi) = mu_window(p.a, p.xi);
    let h = res.h1d;
    let i_lo = (lo * window_scale / h).floor() as i64 - 1;
    let i_hi = (hi * window_scale / h).ceil() as i64 + 1;
    let grid = Grid1D::anchored(i_lo, i_hi, h)?;
    let op = assemble_1d_schrodinger(&grid, potential(p.a, p.xi))?;
    Ok(lowest_eigenpair_with(&op, &res.solver())?.value)
}

/// `μ_a(ξ)` at an explicit resolution (uncached).
pub fn mu_at(res: &Resolution, a: f64, xi: f64) -> Result<f64> {
    mu_with_window(res, a, xi, 1.0)
}

/// `μ_a(ξ)`, memoized in the context.
pub fn mu(ctx: &Context, a: f64, xi: f64) -> Result<f64> {
    let k = (key(a), key(xi));
    if let Some(v) = Context::cached(&ctx.mu, &k) {
        return Ok(v);
    }
    let v = mu_at(ctx.resolution(), a, xi)?;
    Context::store(&ctx.mu, k, v);
    Ok(v)
}

/// Lowest eigenvalue of `-d²/dt² + (t - ξ)²` on the Neumann half-line.
pub fn mu_neumann_at(res: &Resolution, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::Range(format!("xi = {xi}")));
    }
    let grid = HalfLineGrid::new(xi.max(0.0) + WALL_LEVEL.sqrt(), res.h1d)?;
    let op = assemble_half_line_neumann(&grid, |t| (t - xi).powi(2))?;
    Ok(lowest_eigenpair_with(&op, &res.solver())?.value)
}

pub fn mu_neumann(ctx: &Context, xi: f64) -> Result<f64> {
    mu_neumann_at(ctx.resolution(), xi)
}

fn theta0_single(res: &Resolution) -> Result<(f64, f64)> {
    let f = |xi: f64| mu_neumann_at(res, xi);
    let m = scan_then_golden(&f, 0.0, 2.0, SCAN_STEP, XI_TOL)?;
    Ok((m.value, m.x))
}

/// `Θ₀` and its minimizer at an explicit resolution, with a Richardson
/// estimate from the mesh twice as coarse.
pub fn theta0_at(res: &Resolution) -> Result<Theta0> {
    let (value, xi_min) = theta0_single(res)?;
    let (coarse_value, _) = theta0_single(&res.scaled(2.0))?;
    let richardson = (4.0 * value - coarse_value) / 3.0;
    Ok(Theta0 { value, xi_min, coarse_value, richardson, mesh_error: (value - richardson).abs() })
}

/// `Θ₀`, computed once per context.
pub fn theta0(ctx: &Context) -> Result<Theta0> {
    if let Some(t) = ctx.theta0.get() {
        return Ok(*t);
    }
    let t = theta0_at(ctx.resolution())?;
    Ok(*ctx.theta0.get_or_init(|| t))
}

/// Samples `μ_a` on `xis` and, when the sampled minimum is interior, refines
/// it by golden section.
pub fn sample_curve(ctx: &Context, a: f64, xis: &[f64]) -> Result<FiberCurve> {
    check_a(a, true)?;
    if xis.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Range("xi samples must be strictly increasing".into()));
    }
    let f = |xi: f64| mu(ctx, a, xi);
    let samples: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        xis.par_iter().map(|&xi| f(xi).map(|v| (xi, v))).collect::<Result<_>>()?
    };
    let minimizer = match argmin(&samples) {
        i if i > 0 && i + 1 < samples.len() => {
            let (x, v) = crate::minimize::golden(&f, samples[i - 1].0, samples[i + 1].0, XI_TOL)?;
            Some(if samples[i].1 < v { samples[i] } else { (x, v) })
        }
        _ => None,
    };
    Ok(FiberCurve { a, samples, minimizer, refinement_tol: XI_TOL })
}

/// `β_a = inf_ξ μ_a(ξ)` at an explicit resolution.
pub fn beta_at(res: &Resolution, a: f64) -> Result<Beta> {
    check_a(a, false)?;
    let f = |xi: f64| mu_at(res, a, xi);
    if a > 0.0 {
        let n = (16.0 / SCAN_STEP).round() as usize + 1;
        let samples = sample(&f, -8.0, 8.0, n)?;
        let scan_min = samples[argmin(&samples)].1;
        Ok(Beta { a, value: a, xi_star: None, scan_min, certified: scan_min >= a - BETA_CERT_TOL })
    } else {
        let m = scan_then_golden(&f, -1.0, 6.0, SCAN_STEP, XI_TOL)?;
        let scan_min = m.samples[argmin(&m.samples)].1;
        Ok(Beta { a, value: m.value, xi_star: Some(m.x), scan_min, certified: true })
    }
}

/// `β_a`, memoized in the context.
pub fn beta(ctx: &Context, a: f64) -> Result<Beta> {
    if let Some(b) = Context::cached(&ctx.beta, &key(a)) {
        return Ok(b);
    }
    let b = beta_at(ctx.resolution(), a)?;
    Context::store(&ctx.beta, key(a), b);
    Ok(b)
}
