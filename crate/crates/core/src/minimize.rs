//! Bracketed scalar minimization: uniform scan followed by golden section.

use rayon::prelude::*;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of [`scan_then_golden`].
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// Scan samples `(x, f(x))`, ascending in `x`.
    pub samples: Vec<(f64, f64)>,
}

/// Evaluates `f` at `n` equispaced points of `[lo, hi]` in parallel.
pub fn sample<F>(f: &F, lo: f64, hi: f64, n: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = n.max(2);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let x = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            f(x).map(|v| (x, v))
        })
        .collect()
}

/// Index of the smallest sample; ties resolve to the smallest `x`.
pub fn argmin(samples: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.1 < samples[best].1 {
            best = i;
        }
    }
    best
}

/// Golden-section search on `[lo, hi]` down to an interval of width `xtol`.
pub fn golden<F>(f: &F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > xtol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Scans `[lo, hi]` with spacing close to `step`, then refines the sampled
/// minimum by golden section. Fails when the minimum sits on the scan
/// boundary, since no interior bracket exists there.
pub fn scan_then_golden<F>(f: &F, lo: f64, hi: f64, step: f64, xtol: f64) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = ((hi - lo) / step).round() as usize + 1;
    let samples = sample(f, lo, hi, n)?;
    let i = argmin(&samples);
    if i == 0 || i + 1 == samples.len() {
        return Err(Error::MinimizerNotBracketed { lo, hi });
    }
    let (x, value) = golden(f, samples[i - 1].0, samples[i + 1].0, xtol)?;
    let (x, value) = if samples[i].1 < value { samples[i] } else { (x, value) };
    Ok(Minimum { x, value, samples })
}
