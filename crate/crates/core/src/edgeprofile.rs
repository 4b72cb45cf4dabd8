//! Model energies along a discontinuity edge, given as its angle profile
//! `(α_s, γ_s)`, with the localization set where they drop below `|a| Θ₀`
//! and the leading-order ground-state energy `b · min λ`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{key, Context};
use crate::error::{Error, Result};
use crate::fiber1d;
use crate::reduced2d::{self, StepFieldParams, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSample {
    /// Arclength.
    pub s: f64,
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeGeometry {
    pub samples: Vec<EdgeSample>,
    pub closed: bool,
}

impl EdgeGeometry {
    pub fn new(samples: Vec<EdgeSample>, closed: bool) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Range("edge geometry needs at least one sample".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].s > w[0].s) {
                return Err(Error::Range(format!("arclengths not increasing at s = {}", w[1].s)));
            }
        }
        for p in &samples {
            if !(p.alpha > 0.0 && p.alpha < PI) || !(0.0..=FRAC_PI_2).contains(&p.gamma) || !p.s.is_finite() {
                return Err(Error::Range(format!("sample (s={}, alpha={}, gamma={}) out of range", p.s, p.alpha, p.gamma)));
            }
        }
        Ok(Self { samples, closed })
    }

    /// Unit ball cut by a plane containing the field direction `(0, 0, 1)`:
    /// the edge is a great circle, the dihedral angle is `π/2` everywhere and
    /// `γ_s` is the angle between the field and the tangent.
    pub fn ball_cut(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("ball_cut needs n >= 1".into()));
        }
        let samples = (0..n)
            .map(|k| {
                let s = 2.0 * PI * k as f64 / n as f64;
                let gamma = s.cos().abs().min(1.0).acos();
                EdgeSample { s, alpha: FRAC_PI_2, gamma }
            })
            .collect();
        Self::new(samples, true)
    }

    /// Reads CSV with header `s,alpha,gamma`.
    pub fn from_csv<R: Read>(input: R, closed: bool) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let samples = r.deserialize().collect::<std::result::Result<Vec<EdgeSample>, _>>()?;
        Self::new(samples, closed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub s: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub in_d: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LocalizationReport {
    pub a: f64,
    /// `|a| Θ₀`.
    pub threshold: f64,
    pub lambda_profile: Vec<ProfilePoint>,
    pub lambda_min: f64,
    /// Arclength intervals `[s_first, s_last]` of consecutive samples in D.
    pub D_set: Vec<(f64, f64)>,
    pub assumption_holds: bool,
}

/// `λ` at every sample through the band-profile cache, and the set where
/// `λ < |a| Θ₀ - margin`. Inconclusive samples never enter D.
pub fn profile(ctx: &Context, geometry: &EdgeGeometry, a: f64) -> Result<LocalizationReport> {
    let params: Vec<StepFieldParams> =
        geometry.samples.iter().map(|p| StepFieldParams::new(p.alpha, p.gamma, a)).collect::<Result<_>>()?;
    let mut distinct: Vec<StepFieldParams> = Vec::new();
    for p in &params {
        if !distinct.iter().any(|q| key(q.alpha) == key(p.alpha) && key(q.gamma) == key(p.gamma)) {
            distinct.push(*p);
        }
    }
    distinct.par_iter().map(|p| reduced2d::lambda(ctx, p).map(|_| ())).collect::<Result<Vec<()>>>()?;

    let threshold = a.abs() * fiber1d::theta0(ctx)?.value;
    let lambda_profile: Vec<ProfilePoint> = geometry
        .samples
        .iter()
        .zip(&params)
        .map(|(g, p)| {
            let b = reduced2d::lambda(ctx, p)?;
            let in_d = b.verdict != Verdict::Inconclusive && b.lambda < threshold - b.margin;
            Ok(ProfilePoint {
                s: g.s,
                alpha: g.alpha,
                gamma: g.gamma,
                lambda: b.lambda,
                margin: b.margin,
                verdict: b.verdict,
                in_d,
            })
        })
        .collect::<Result<_>>()?;

    let mut d_set = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for p in &lambda_profile {
        run = match (run, p.in_d) {
            (Some((lo, _)), true) => Some((lo, p.s)),
            (None, true) => Some((p.s, p.s)),
            (Some(r), false) => {
                d_set.push(r);
                None
            }
            (None, false) => None,
        };
    }
    d_set.extend(run);

    let lambda_min = lambda_profile.iter().map(|p| p.lambda).fold(f64::INFINITY, f64::min);
    Ok(LocalizationReport {
        a,
        threshold,
        lambda_min,
        assumption_holds: !d_set.is_empty(),
        D_set: d_set,
        lambda_profile,
    })
}

/// Leading term `b · λ_min` of the ground-state energy at field strength
/// `b`; the remainder is `o(b)` and not estimated.
pub fn ground_energy_prediction(report: &LocalizationReport, b: f64) -> Result<f64> {
    if !report.assumption_holds {
        return Err(Error::AssumptionFails);
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Range(format!("b = {b} must be positive")));
    }
    Ok(b * report.lambda_min)
}
