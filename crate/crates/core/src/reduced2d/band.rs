use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::StepFieldParams;
use super::spectral::{sigma, SpectralResult};
use crate::context::{key, Context};
use crate::error::{Error, Result};
use crate::minimize::{argmin, golden};
use crate::{fiber1d, zeta};

/// Tolerance in `τ` of the golden-section refinement.
pub const TAU_TOL: f64 = 1e-6;
/// Proximity of the window-end samples to the limits at `τ → ±∞`.
pub const ENDPOINT_TOL: f64 = 3e-2;
/// Samples of the default profile.
pub const DEFAULT_SAMPLES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `λ` is attained at an interior `τ*` and lies below
    /// `min(β_a, |a| ζ_ν₀)` by more than the error margin.
    EigenvalueCertified,
    /// The profile decreases towards a window end and the end sample is
    /// close to the corresponding limit.
    InfimumAtInfinity,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandProfile {
    pub params: StepFieldParams,
    /// Uniform samples in `τ`, without eigenvectors.
    pub samples: Vec<SpectralResult>,
    pub tau_star: Option<f64>,
    pub lambda: f64,
    /// `min(β_a, |a| ζ_ν₀)`.
    pub lambda_bound: f64,
    /// Error margin of the sample that realizes `lambda`.
    pub margin: f64,
    /// Limits of `σ` as `τ → -∞` and `τ → +∞`; `None` stands for `+∞`.
    pub limits: (Option<f64>, Option<f64>),
    pub verdict: Verdict,
}

/// Half-width `T` of the default window `[-T, T]`.
pub fn tau_window(params: &StepFieldParams) -> f64 {
    if params.gamma == 0.0 {
        4.0
    } else {
        (4.0f64).max(4.0 / (params.a.abs().min(1.0) * params.gamma.sin()))
    }
}

/// `min(β_a, |a| ζ_ν₀)`.
pub fn lambda_bound(ctx: &Context, params: &StepFieldParams) -> Result<f64> {
    let beta = fiber1d::beta(ctx, params.a)?.value;
    Ok(beta.min(params.a.abs() * zeta::zeta(ctx, params.nu0)?))
}

/// Limits of the band function at `τ → ∓∞`; `None` means `+∞`.
pub fn band_limits(ctx: &Context, params: &StepFieldParams) -> Result<(Option<f64>, Option<f64>)> {
    if params.gamma == 0.0 {
        return Ok((None, None));
    }
    let z = zeta::zeta(ctx, params.nu0)?;
    Ok(if params.a > 0.0 { (Some(params.a * z), Some(z)) } else { (None, Some(params.a.abs() * z)) })
}

/// Samples `σ` on `tau_range` (default `[-T, T]`), refines the minimum and
/// classifies the result.
pub fn band_profile(
    ctx: &Context,
    params: &StepFieldParams,
    tau_range: Option<(f64, f64)>,
    n_samples: usize,
) -> Result<BandProfile> {
    let t = tau_window(params);
    let (lo, hi) = tau_range.unwrap_or((-t, t));
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Range(format!("tau range [{lo}, {hi}]")));
    }
    if n_samples < 5 {
        return Err(Error::Range(format!("need at least 5 samples, got {n_samples}")));
    }
    let spacing = (hi - lo) / (n_samples - 1) as f64;
    let taus: Vec<f64> = (0..n_samples)
        .map(|i| if i + 1 == n_samples { hi } else { lo + spacing * i as f64 })
        .collect();
    let full: Vec<SpectralResult> = taus.par_iter().map(|&tau| sigma(ctx, params, tau)).collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64)> = full.iter().map(|r| (r.tau, r.sigma)).collect();
    let i = argmin(&pairs);
    let interior = i > 0 && i + 1 < pairs.len();

    // For a < 0 the essential threshold reaches β_a at τ̃ = ξ_a sin γ, so the
    // band function dips there; the dip can be narrower than the sampling.
    let mut candidate = full[i].clone();
    if params.a < 0.0 && params.gamma > 0.0 {
        if let Some(xi_a) = fiber1d::beta(ctx, params.a)?.xi_star {
            let tau_tilde = xi_a * params.gamma.sin();
            if lo < tau_tilde && tau_tilde < hi {
                let r = sigma(ctx, params, tau_tilde)?;
                if r.sigma < candidate.sigma {
                    candidate = r;
                }
            }
        }
    }
    let interior = interior || candidate.tau != full[i].tau;

    let best = if !interior {
        candidate
    } else if params.gamma == 0.0 {
        // σ = μ + τ² exactly, so the minimizer is τ = 0.
        sigma(ctx, params, 0.0)?
    } else {
        let delta = spacing.min(0.5);
        let f = |tau: f64| sigma(ctx, params, tau).map(|r| r.sigma);
        let (lo_b, hi_b) = ((candidate.tau - delta).max(lo), (candidate.tau + delta).min(hi));
        let (tau, _) = golden(&f, lo_b, hi_b, TAU_TOL)?;
        let refined = sigma(ctx, params, tau)?;
        if refined.sigma <= candidate.sigma { refined } else { candidate }
    };

    let lambda_bound = lambda_bound(ctx, params)?;
    let limits = band_limits(ctx, params)?;
    let near = |limit: Option<f64>, v: f64| limit.is_some_and(|l| (v - l).abs() <= ENDPOINT_TOL);
    let verdict = if interior && best.below_essential && best.sigma < lambda_bound - best.margin {
        Verdict::EigenvalueCertified
    } else if !interior && ((i == 0 && near(limits.0, best.sigma)) || (i > 0 && near(limits.1, best.sigma))) {
        Verdict::InfimumAtInfinity
    } else {
        Verdict::Inconclusive
    };
    Ok(BandProfile {
        params: *params,
        samples: full.iter().map(SpectralResult::without_vector).collect(),
        tau_star: interior.then_some(best.tau),
        lambda: best.sigma,
        lambda_bound,
        margin: best.margin,
        limits,
        verdict,
    })
}

/// `λ_{α,γ,a}` via the default profile, memoized in the context.
pub fn lambda(ctx: &Context, params: &StepFieldParams) -> Result<BandProfile> {
    let k = (key(params.alpha), key(params.gamma), key(params.a));
    if let Some(p) = Context::cached(&ctx.lambda, &k) {
        return Ok(p);
    }
    let p = band_profile(ctx, params, None, DEFAULT_SAMPLES)?;
    Context::store(&ctx.lambda, k, p.clone());
    Ok(p)
}
