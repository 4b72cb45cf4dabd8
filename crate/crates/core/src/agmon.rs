//! Exponential localization of certified eigenfunctions: shell masses on
//! half-annuli around the origin, a log-linear tail fit, and the weighted
//! energy `Q(e^{η|x|} v)`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigencore::{Grid2D, SparseHermitianOp};
use crate::error::{Error, Result};
use crate::reduced2d::Eigenstate;

/// Relative shell mass where the tail fit starts.
pub const FIT_START: f64 = 1e-2;
/// Relative shell mass below which shells are treated as noise.
pub const FIT_FLOOR: f64 = 1e-12;
/// Fewest shells accepted for the fit.
pub const MIN_SHELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    /// Inner radius; the shell is `r ≤ |x| < r + 1`.
    pub radius: f64,
    /// Mass relative to the total.
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub eta: f64,
    /// Mass decays like `exp(-2 eta_fit r)` on the fit window.
    pub eta_fit: f64,
    /// `√(σ_ess - σ)`.
    pub eta_bound: f64,
    pub slope: f64,
    pub r_squared: f64,
    /// Radii `[first, last]` of the fitted shells.
    pub fit_window: (f64, f64),
    pub weighted_energy: f64,
    /// Radius after which shell masses never increase.
    pub bulk_radius: f64,
    pub shells: Vec<Shell>,
}

/// Relative masses on the half-annuli that fit entirely inside the box.
pub fn shell_masses(grid: &Grid2D, v: &[Complex64]) -> Vec<Shell> {
    let r_max = (-grid.x1_lo).min(grid.x1_hi).min(grid.x2_hi).floor().max(0.0) as usize;
    let mut mass = vec![0.0; r_max];
    let mut total = 0.0;
    for (k, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        total += m;
        let [x1, x2] = grid.point(k);
        let s = x1.hypot(x2) as usize;
        if s < r_max {
            mass[s] += m;
        }
    }
    mass.iter().enumerate().map(|(r, m)| Shell { radius: r as f64, mass: m / total }).collect()
}

/// Least-squares line through `(x, y)`: slope and `R²`.
fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { slope * sxy / syy };
    (slope, r2)
}

/// Decay analysis of a normalized eigenvector `v` of `op` with eigenvalue
/// `sigma` below `sigma_ess`.
pub fn decay_report_with(
    op: &SparseHermitianOp,
    grid: &Grid2D,
    v: &[Complex64],
    sigma: f64,
    sigma_ess: f64,
    eta: f64,
) -> Result<DecayReport> {
    if !(sigma < sigma_ess) {
        return Err(Error::NotBelowEssential { sigma, sigma_ess, margin: 0.0 });
    }
    let eta_bound = (sigma_ess - sigma).sqrt();
    if !(0.0..eta_bound).contains(&eta) {
        return Err(Error::EtaOutOfRange { eta, eta_bound });
    }
    let shells = shell_masses(grid, v);
    let start = shells.iter().position(|s| s.mass < FIT_START);
    let usable: Vec<&Shell> = match start {
        Some(i) => shells[i..].iter().take_while(|s| s.mass > FIT_FLOOR).collect(),
        None => Vec::new(),
    };
    if usable.len() < MIN_SHELLS {
        return Err(Error::TailTooShort { usable: usable.len() });
    }
    let points: Vec<(f64, f64)> = usable.iter().map(|s| (s.radius + 0.5, s.mass.ln())).collect();
    let (slope, r_squared) = linear_fit(&points);

    let bulk = shells.windows(2).rposition(|w| w[1].mass > w[0].mass).map_or(0, |i| i + 1);
    let weighted: Vec<Complex64> =
        v.iter().enumerate().map(|(k, z)| z * (eta * grid.point(k)[0].hypot(grid.point(k)[1])).exp()).collect();

    Ok(DecayReport {
        eta,
        eta_fit: -0.5 * slope,
        eta_bound,
        slope,
        r_squared,
        fit_window: (usable[0].radius, usable[usable.len() - 1].radius),
        weighted_energy: op.quadratic_form(&weighted),
        bulk_radius: shells[bulk.min(shells.len() - 1)].radius,
        shells,
    })
}

pub fn decay_report(state: &Eigenstate, eta: f64) -> Result<DecayReport> {
    decay_report_with(&state.operator, &state.grid, &state.pair.vector, state.sigma, state.sigma_ess, eta)
}

/// CSV with columns `radius, shell_mass`.
pub fn write_shells_csv<W: Write>(report: &DecayReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["radius", "shell_mass"])?;
    for s in &report.shells {
        w.write_record([s.radius.to_string(), s.mass.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
