use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber1d::check_a;

/// Smallest admissible `sin α`; the gauge carries `cot α`.
pub const MIN_SIN_ALPHA: f64 = 0.05;

/// Inputs of `γ` up to this far above `π/2` are read as `π/2`, so that
/// rounded decimal values of `π/2` are accepted.
pub const GAMMA_SLACK: f64 = 1e-4;

/// The triple `(a, α, γ)` with the derived angle `ν₀ = arcsin(sin α sin γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepFieldParams {
    pub a: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub nu0: f64,
}

impl StepFieldParams {
    pub fn new(alpha: f64, gamma: f64, a: f64) -> Result<Self> {
        check_a(a, false)?;
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::Range(format!("alpha = {alpha} outside (0, pi)")));
        }
        if alpha.sin() < MIN_SIN_ALPHA {
            return Err(Error::Range(format!("alpha = {alpha} too close to 0 or pi (sin alpha < {MIN_SIN_ALPHA})")));
        }
        let gamma = if gamma > FRAC_PI_2 && gamma <= FRAC_PI_2 + GAMMA_SLACK { FRAC_PI_2 } else { gamma };
        if !(0.0..=FRAC_PI_2).contains(&gamma) {
            return Err(Error::Range(format!("gamma = {gamma} outside [0, pi/2]")));
        }
        let nu0 = (alpha.sin() * gamma.sin()).clamp(0.0, 1.0).asin();
        Ok(Self { a, alpha, gamma, nu0 })
    }

    /// Signed distance-like coordinate `x₁ sin α - x₂ cos α`; positive in
    /// the sector `D¹ = {0 < θ < α}`, zero on the discontinuity line.
    pub fn side(&self, x: [f64; 2]) -> f64 {
        x[0] * self.alpha.sin() - x[1] * self.alpha.cos()
    }

    /// Step function: 1 on `D¹`, `a` on `D²`.
    pub fn step(&self, x: [f64; 2]) -> f64 {
        if self.side(x) > 0.0 {
            1.0
        } else {
            self.a
        }
    }

    /// Electric potential `(s (x₁ sin α - x₂ cos α) sin γ - τ)²`.
    pub fn potential(&self, tau: f64) -> impl Fn([f64; 2]) -> f64 + Sync + '_ {
        let sg = self.gamma.sin();
        move |x| (self.step(x) * sg * self.side(x) - tau).powi(2)
    }
}

/// Which set the minimum of the electric potential lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimumSetKind {
    /// The discontinuity line itself (`a < 0`, `τ < 0`).
    DiscontinuityLine,
    Upsilon1,
    Upsilon2,
    Union,
}

/// Lines of the minimum set, given by `x₁ sin α - x₂ cos α = offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimumSet {
    pub kind: MinimumSetKind,
    /// `τ / sin γ` when the first line belongs to the set.
    pub offset1: Option<f64>,
    /// `τ / (a sin γ)` when the second line belongs to the set.
    pub offset2: Option<f64>,
    pub inf_potential: f64,
}

impl MinimumSet {
    /// Points where the lines of the set meet the boundary `x₂ = 0`.
    pub fn boundary_hits(&self, params: &StepFieldParams) -> Vec<f64> {
        let sa = params.alpha.sin();
        match self.kind {
            MinimumSetKind::DiscontinuityLine => vec![0.0],
            _ => self.offset1.iter().chain(self.offset2.iter()).map(|o| o / sa).collect(),
        }
    }
}

/// Minimum set of the electric potential for `γ > 0`.
pub fn potential_minimum_set(params: &StepFieldParams, tau: f64) -> Result<MinimumSet> {
    if !(params.gamma > 0.0) {
        return Err(Error::Range("minimum set requires gamma > 0".into()));
    }
    if !tau.is_finite() {
        return Err(Error::Range(format!("tau = {tau}")));
    }
    let sg = params.gamma.sin();
    let o1 = tau / sg;
    let o2 = tau / (params.a * sg);
    let set = match (params.a < 0.0, tau >= 0.0) {
        (true, false) => MinimumSet {
            kind: MinimumSetKind::DiscontinuityLine,
            offset1: None,
            offset2: None,
            inf_potential: tau * tau,
        },
        (true, true) => MinimumSet { kind: MinimumSetKind::Union, offset1: Some(o1), offset2: Some(o2), inf_potential: 0.0 },
        (false, true) => MinimumSet { kind: MinimumSetKind::Upsilon1, offset1: Some(o1), offset2: None, inf_potential: 0.0 },
        (false, false) => MinimumSet { kind: MinimumSetKind::Upsilon2, offset1: None, offset2: Some(o2), inf_potential: 0.0 },
    };
    Ok(set)
}
