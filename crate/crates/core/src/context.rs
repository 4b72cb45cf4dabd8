use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::eigencore::{Preconditioner, SolverOptions};

/// Mesh and solver controls shared by every spectral computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Resolution {
    /// Node spacing of the 1D fiber problems.
    pub h1d: f64,
    /// Node spacing of the 2D half-plane problems.
    pub h2d: f64,
    /// Distance kept between the potential's minimum set and the artificial
    /// walls of the 2D boxes.
    pub box_radius: f64,
    /// Eigensolver residual tolerance.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub preconditioner: Preconditioner,
}

impl Default for Resolution {
    fn default() -> Self {
        let solver = SolverOptions::default();
        Self {
            h1d: 0.01,
            h2d: 0.2,
            box_radius: 40.0,
            tol: solver.tol,
            max_iter: solver.max_iter,
            seed: solver.seed,
            preconditioner: solver.preconditioner,
        }
    }
}

impl Resolution {
    pub fn solver(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_iter: self.max_iter, seed: self.seed, preconditioner: self.preconditioner }
    }

    /// Same settings with both mesh spacings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { h1d: self.h1d * factor, h2d: self.h2d * factor, ..*self }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.h1d > 0.0 && self.h1d <= 0.25 && self.h2d > 0.0 && self.h2d <= 1.0 && self.box_radius >= 10.0 && self.tol > 0.0;
        if ok && self.max_iter > 0 {
            Ok(())
        } else {
            Err(crate::Error::InvalidGrid(format!("resolution {self:?}")))
        }
    }
}

/// Rounded floating-point key for the memo tables.
pub(crate) fn key(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

/// Resolution plus read-mostly memo tables of the 1D and 2D model
/// constants. Cheap to share across threads.
#[derive(Debug, Default)]
pub struct Context {
    resolution: Resolution,
    pub(crate) mu: RwLock<HashMap<(i64, i64), f64>>,
    pub(crate) theta0: OnceLock<crate::fiber1d::Theta0>,
    pub(crate) beta: RwLock<HashMap<i64, crate::fiber1d::Beta>>,
    pub(crate) zeta: RwLock<HashMap<i64, f64>>,
    pub(crate) sigma: RwLock<HashMap<[i64; 4], Arc<crate::reduced2d::SpectralResult>>>,
    pub(crate) lambda: RwLock<HashMap<(i64, i64, i64), crate::reduced2d::BandProfile>>,
}

impl Context {
    pub fn new(resolution: Resolution) -> Self {
        Self { resolution, ..Self::default() }
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub(crate) fn cached<K, V>(table: &RwLock<HashMap<K, V>>, k: &K) -> Option<V>
    where
        K: std::hash::Hash + Eq,
        V: Clone,
    {
        table.read().unwrap_or_else(|e| e.into_inner()).get(k).cloned()
    }

    pub(crate) fn store<K, V>(table: &RwLock<HashMap<K, V>>, k: K, v: V)
    where
        K: std::hash::Hash + Eq,
    {
        table.write().unwrap_or_else(|e| e.into_inner()).insert(k, v);
    }
}
