//! Closed-form sufficient condition for the band infimum to be an
//! eigenvalue: the coefficient `A`, the quadratic `P(x) = A x² - (π/2) Λ x + π/2`,
//! the trial-energy functional it comes from, and region scans over `(α, γ, a)`.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::reduced2d::{self, StepFieldParams};

/// Rigorous lower bound for `Θ₀`, fixed independently of mesh settings.
pub const THETA0_LOW: f64 = 0.590106124;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `Λ = min(β_a, |a| ζ_ν₀)` from the numerical solvers.
    ExactLambda,
    /// `Λ` replaced by `|a| Θ₀^low`.
    Theta0LowerBound,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-lambda" => Ok(Self::ExactLambda),
            "theta0-low" | "theta0-lower-bound" => Ok(Self::Theta0LowerBound),
            _ => Err(Error::Range(format!("unknown variant '{s}' (expected exact or theta0-low)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CriterionReport {
    pub A: f64,
    pub Lambda: f64,
    pub x_min: f64,
    pub P_min: f64,
    pub admissible: bool,
    pub variant: Variant,
    /// Set when `A ≤ 0`; `x_min` is then a point past the positive root of
    /// `P` rather than a minimizer.
    pub nonpositive_a: bool,
}

/// The coefficient `A[α, γ, a]`.
pub fn coefficient_a(p: &StepFieldParams) -> f64 {
    let (al, a) = (p.alpha, p.a);
    let (sg, cg) = p.gamma.sin_cos();
    let e = f64::exp;
    let ep = e(PI);
    let bracket = 4.0 * (a - 1.0) * ((a - ep) * e(PI - al) + (a * ep - 1.0) * e(al))
        - (a - 1.0).powi(2) * (e(2.0 * PI - 2.0 * al) + e(2.0 * al))
        - 2.0 * ep * (-4.0 * a + (3.0 - 2.0 * a + 3.0 * a * a) * PI.cosh());
    let tilt = -(a * a * (PI - al) + al) * (-3.0 + (2.0 * p.gamma).cos())
        + 2.0 * (a * a - 1.0) * sg * sg * (2.0 * al).sin();
    // -1 + coth π = 2 / (e^{2π} - 1)
    let pre = 2.0 / (e(2.0 * PI) - 1.0) / 128.0;
    pre * (PI * cg * cg * bracket + 4.0 * (e(2.0 * PI) - 1.0) * tilt)
}

/// `P(x) = A x² - (π/2) Λ x + π/2`.
#[allow(non_snake_case)]
pub fn polynomial(A: f64, lambda: f64, x: f64) -> f64 {
    A * x * x - 0.5 * PI * lambda * x + 0.5 * PI
}

pub fn lambda_bound(ctx: &Context, p: &StepFieldParams, variant: Variant) -> Result<f64> {
    match variant {
        Variant::ExactLambda => reduced2d::lambda_bound(ctx, p),
        Variant::Theta0LowerBound => Ok(p.a.abs() * THETA0_LOW),
    }
}

/// Minimizes `P` over `x > 0` for given `A` and `Λ`.
#[allow(non_snake_case)]
pub fn report_from(A: f64, lambda: f64, variant: Variant) -> CriterionReport {
    let b = 0.5 * PI * lambda;
    if A > 0.0 {
        let x_min = b / (2.0 * A);
        let P_min = 0.5 * PI - b * b / (4.0 * A);
        return CriterionReport { A, Lambda: lambda, x_min, P_min, admissible: P_min < 0.0, variant, nonpositive_a: false };
    }
    // P is eventually negative; step past its positive root.
    let root = if A == 0.0 {
        0.5 * PI / b
    } else {
        (b - (b * b - 2.0 * PI * A).sqrt()) / (2.0 * A)
    };
    let x_min = 2.0 * root;
    let P_min = polynomial(A, lambda, x_min);
    CriterionReport { A, Lambda: lambda, x_min, P_min, admissible: P_min < 0.0, variant, nonpositive_a: true }
}

pub fn admissibility(ctx: &Context, p: &StepFieldParams, variant: Variant) -> Result<CriterionReport> {
    Ok(report_from(coefficient_a(p), lambda_bound(ctx, p, variant)?, variant))
}

/// Trial phase `g(θ) = c₁eᶿ + c₂e⁻ᶿ` on `(-π+α, 0]` and `c₃eᶿ + c₄e⁻ᶿ` on
/// `(0, α)`, with Gaussian radial profile of rate `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialFunctionSpec {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl TrialFunctionSpec {
    /// `c₄` is fixed by continuity of `g` at `θ = 0`.
    pub fn new(omega: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Range(format!("omega = {omega} must be positive")));
        }
        Ok(Self { omega, c1, c2, c3, c4: c1 + c2 - c3 })
    }

    /// The coefficients minimizing the trial energy at rate `omega`.
    pub fn optimal(p: &StepFieldParams, omega: f64) -> Result<Self> {
        let (al, a) = (p.alpha, p.a);
        let e = f64::exp;
        let ep = e(PI);
        let k = PI.sqrt() * p.gamma.cos() / omega.sqrt();
        let coth_m1 = 2.0 / (e(2.0 * PI) - 1.0);
        let c1 = e(PI - 2.0 * al) * ((a - 1.0) * ep + (a - 1.0) * e(PI + 2.0 * al) + 2.0 * e(al) * (ep - a)) * k * coth_m1
            / 16.0;
        let c2 = ((a - 1.0) + (a - 1.0) * e(2.0 * al) - 2.0 * (a * ep - 1.0) * e(al)) * k * coth_m1 / 16.0;
        let c3 = e(-al) * (ep - a + (a - 1.0) * (PI - al).cosh()) * k / PI.sinh() / 8.0;
        Self::new(omega, c1, c2, c3)
    }
}

/// `J[u₀] = Q(u₀) - Λ‖u₀‖²` for the trial function of `spec`.
pub fn trial_energy(p: &StepFieldParams, spec: &TrialFunctionSpec, lambda: f64) -> f64 {
    let (al, a, w) = (p.alpha, p.a, spec.omega);
    let (sg, cg) = p.gamma.sin_cos();
    let (c1, c2, c3) = (spec.c1, spec.c2, spec.c3);
    let e = f64::exp;
    let em = e(-2.0 * al);
    let r = PI.sqrt() * cg / (4.0 * w.powf(1.5));
    let weight = a * a * (PI - al) + al;
    (2.0 - em - e(-2.0 * PI + 2.0 * al)) / (2.0 * w) * c1 * c1
        + (e(2.0 * PI - 2.0 * al) - em) / (2.0 * w) * c2 * c2
        + (e(2.0 * al) - em) / (2.0 * w) * c3 * c3
        + (1.0 - em) / w * c1 * c2
        + (em - 1.0) / w * (c1 * c3 + c2 * c3)
        + (1.0 - a - e(-al) + a * e(al - PI)) * r * c1
        + (1.0 - a - e(-al) + a * e(PI - al)) * r * c2
        + (e(-al) - e(al)) * r * c3
        + (4.0 * PI * w * w - 4.0 * PI * w * lambda + weight * cg * cg) / (8.0 * w * w)
        + 2.0 * (weight + (a * a - 1.0) * al.cos() * al.sin()) * sg * sg / (8.0 * w * w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub gamma: f64,
    pub a: f64,
    pub report: CriterionReport,
}

/// Admissibility on the tensor grid `alphas × gammas × a_values`, ordered
/// with `a` fastest.
pub fn region_scan(
    ctx: &Context,
    alphas: &[f64],
    gammas: &[f64],
    a_values: &[f64],
    variant: Variant,
) -> Result<Vec<RegionCell>> {
    let triples: Vec<(f64, f64, f64)> = alphas
        .iter()
        .flat_map(|&al| gammas.iter().flat_map(move |&g| a_values.iter().map(move |&a| (al, g, a))))
        .collect();
    triples
        .par_iter()
        .map(|&(alpha, gamma, a)| {
            let p = StepFieldParams::new(alpha, gamma, a)?;
            Ok(RegionCell { alpha, gamma, a, report: admissibility(ctx, &p, variant)? })
        })
        .collect()
}

/// CSV with columns `alpha, gamma, a, A, Lambda, P_min, admissible`.
pub fn write_region_csv<W: Write>(cells: &[RegionCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "gamma", "a", "A", "Lambda", "P_min", "admissible"])?;
    for c in cells {
        let r = &c.report;
        w.write_record([
            c.alpha.to_string(),
            c.gamma.to_string(),
            c.a.to_string(),
            r.A.to_string(),
            r.Lambda.to_string(),
            r.P_min.to_string(),
            r.admissible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn params(al: f64, g: f64, a: f64) -> StepFieldParams {
        StepFieldParams::new(al, g, a).unwrap()
    }

    #[test]
    fn a_closed_forms() {
        let e = f64::exp;
        let want = PI / 4.0 * (e(FRAC_PI_2) - 1.0) / (e(PI) - 1.0);
        assert_relative_eq!(coefficient_a(&params(FRAC_PI_2, 0.0, -1.0)), want, max_relative = 1e-12);
        assert_relative_eq!(coefficient_a(&params(FRAC_PI_2, FRAC_PI_2, -1.0)), PI / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn theta0_variant_examples() {
        let r = report_from(coefficient_a(&params(FRAC_PI_2, 0.0, -1.0)), THETA0_LOW, Variant::Theta0LowerBound);
        assert!(r.admissible && r.x_min > 0.0);
        assert_relative_eq!(polynomial(r.A, r.Lambda, r.x_min), r.P_min, epsilon = 1e-14);
        let r = report_from(PI / 4.0, THETA0_LOW, Variant::Theta0LowerBound);
        assert!(!r.admissible);
    }

    #[test]
    fn nonpositive_a_branch() {
        for a_coef in [-0.3, 0.0] {
            let r = report_from(a_coef, 0.4, Variant::ExactLambda);
            assert!(r.nonpositive_a && r.admissible && r.x_min > 0.0 && r.P_min < 0.0);
        }
    }

    #[test]
    fn optimal_trial_energy_is_p() {
        let p = params(1.2, 0.3, -0.6);
        let spec = TrialFunctionSpec::optimal(&p, 0.8).unwrap();
        let j = trial_energy(&p, &spec, 0.4);
        assert_relative_eq!(j, polynomial(coefficient_a(&p), 0.4, 1.0 / 0.8), epsilon = 1e-12);
        assert_relative_eq!(j, 0.9559071474209538, epsilon = 1e-12);
    }

    #[test]
    fn variant_parse() {
        assert_eq!("theta0-low".parse::<Variant>().unwrap(), Variant::Theta0LowerBound);
        assert!("x".parse::<Variant>().is_err());
    }
}
