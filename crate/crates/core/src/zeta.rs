//! `ζ_ν`, the ground energy of the half-space Neumann operator with a unit
//! field at angle `ν` to the boundary plane.
//!
//! With the gauge `A = (x₂ cos ν - x₃ sin ν, 0, 0)` and a partial Fourier
//! transform in `x₁`, the Fourier parameter is absorbed by a translation in
//! `x₃` when `sin ν ≠ 0`, which leaves the 2D problem
//! `-∂²_s - ∂²_t + (t cos ν - s sin ν)²` on `{t > 0}` with a Neumann
//! condition at `t = 0`. Here `s` is the grid coordinate `x1` and `t` is `x2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{key, Context, Resolution};
use crate::eigencore::{assemble_2d_magnetic_schrodinger, lowest_eigenpair_with, Grid2D, NoField};
use crate::error::{Error, Result};
use crate::fiber1d;

/// Length of the potential's zero line kept inside the box.
pub const LINE_LENGTH: f64 = 60.0;
/// Margin around the zero line; the potential reaches `MARGIN²` there.
pub const MARGIN: f64 = 10.0;
/// Approximate minimizer of the de Gennes band, used to place the box.
const XI0_APPROX: f64 = 0.7682;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct TiltAngle(f64);

impl TiltAngle {
    pub fn new(nu: f64) -> Result<Self> {
        if (0.0..=std::f64::consts::FRAC_PI_2).contains(&nu) {
            Ok(Self(nu))
        } else {
            Err(Error::Range(format!("nu = {nu} outside [0, pi/2]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ζ_ν` with its discretization diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub nu: f64,
    /// Richardson extrapolation of `fine` and `coarse`.
    pub value: f64,
    /// Lowest eigenvalue at the resolution's 2D spacing.
    pub fine: f64,
    /// Same on the mesh twice as coarse.
    pub coarse: f64,
    pub mesh_error: f64,
    /// Relative mass within 3 units of the artificial walls (fine mesh).
    pub wall_mass: f64,
}

/// Truncation box of the reduced problem, stretched by `scale`.
pub fn zeta_box(nu: f64, h: f64, scale: f64) -> Result<Grid2D> {
    let (s, c) = nu.sin_cos();
    let len = LINE_LENGTH * scale;
    let x1_lo = -(8.0 / s).min(len);
    let x1_hi = (len * c).max(((XI0_APPROX + 6.0) / s).min(400.0)) + MARGIN;
    let x2_hi = len * s + MARGIN;
    Grid2D::covering(x1_lo, x1_hi, x2_hi, h)
}

fn lowest_on_box(res: &Resolution, nu: f64, h: f64, scale: f64) -> Result<(f64, f64)> {
    let grid = zeta_box(nu, h, scale)?;
    let (s, c) = nu.sin_cos();
    let v = move |p: [f64; 2]| (p[1] * c - p[0] * s).powi(2);
    let op = assemble_2d_magnetic_schrodinger(&grid, &NoField, &v)?;
    let pair = lowest_eigenpair_with(&op, &res.solver())?;
    Ok((pair.value, grid.wall_mass(&pair.vector, 3.0)))
}

/// `ζ_ν` at an explicit resolution; `box_scale` stretches the truncation box.
pub fn zeta_detailed(ctx: &Context, nu: f64, box_scale: f64) -> Result<ZetaValue> {
    let nu = TiltAngle::new(nu)?.value();
    let res = ctx.resolution();
    if nu == 0.0 {
        let t = fiber1d::theta0(ctx)?;
        return Ok(ZetaValue {
            nu,
            value: t.value,
            fine: t.value,
            coarse: t.coarse_value,
            mesh_error: t.mesh_error,
            wall_mass: 0.0,
        });
    }
    let (fine, wall_mass) = lowest_on_box(res, nu, res.h2d, box_scale)?;
    let (coarse, _) = lowest_on_box(res, nu, 2.0 * res.h2d, box_scale)?;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(ZetaValue { nu, value, fine, coarse, mesh_error: (fine - value).abs(), wall_mass })
}

/// `ζ_ν`, memoized in the context.
pub fn zeta(ctx: &Context, nu: f64) -> Result<f64> {
    if let Some(v) = Context::cached(&ctx.zeta, &key(nu)) {
        return Ok(v);
    }
    let v = zeta_detailed(ctx, nu, 1.0)?.value;
    Context::store(&ctx.zeta, key(nu), v);
    Ok(v)
}

/// `ζ` on an ascending list of angles, checked for monotonicity.
///
/// A decrease larger than twice the combined mesh error of the two points
/// (plus the solver tolerance) is reported as a discretization failure.
pub fn zeta_profile(ctx: &Context, nus: &[f64]) -> Result<Vec<ZetaValue>> {
    if nus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Range("nu grid must be ascending".into()));
    }
    let values: Vec<ZetaValue> = nus
        .par_iter()
        .map(|&nu| {
            let z = zeta_detailed(ctx, nu, 1.0)?;
            Context::store(&ctx.zeta, key(nu), z.value);
            Ok(z)
        })
        .collect::<Result<_>>()?;
    for w in values.windows(2) {
        let drop = w[0].value - w[1].value;
        let tol = 2.0 * (w[0].mesh_error + w[1].mesh_error + ctx.resolution().tol);
        if drop > tol {
            return Err(Error::MonotonicityViolation { nu_lo: w[0].nu, nu_hi: w[1].nu, drop });
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_range() {
        assert!(TiltAngle::new(-0.1).is_err());
        assert!(TiltAngle::new(1.6).is_err());
        assert!(TiltAngle::new(0.0).is_ok());
    }

    #[test]
    fn box_contains_the_well() {
        let g = zeta_box(0.3, 0.2, 1.0).unwrap();
        let s = (XI0_APPROX + 6.0) / 0.3f64.sin();
        assert!(g.x1_hi >= s && g.x1_lo < 0.0);
    }

    #[test]
    fn unsorted_profile_rejected() {
        let ctx = Context::default();
        assert!(zeta_profile(&ctx, &[0.5, 0.2]).is_err());
    }
}
