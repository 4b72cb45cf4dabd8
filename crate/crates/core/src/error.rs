use thiserror::Error;

/// Failures raised anywhere in the toolkit.
///
/// Numerical failures (non-convergence, truncation, certification) are kept
/// distinct from input validation so front ends can map them to different
/// exit statuses.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NonConvergence { iterations: usize, best_residual: f64 },

    #[error("operator is not Hermitian: entry ({row}, {col}) mismatch {mismatch:.3e}")]
    NotHermitian { row: usize, col: usize, mismatch: f64 },

    #[error("vector potential jumps by {jump:.3e} across the discontinuity line near ({x1:.4}, {x2:.4})")]
    GaugeDiscontinuity { jump: f64, x1: f64, x2: f64 },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("no interior minimizer bracketed on [{lo}, {hi}]")]
    MinimizerNotBracketed { lo: f64, hi: f64 },

    #[error("profile decreases by {drop:.3e} between nu = {nu_lo:.6} and nu = {nu_hi:.6}")]
    MonotonicityViolation { nu_lo: f64, nu_hi: f64, drop: f64 },

    #[error("eigenfunction mass {wall_mass:.3e} near the artificial walls exceeds {threshold:.1e}")]
    GridTooSmall { wall_mass: f64, threshold: f64 },

    #[error("sigma = {sigma:.8} is not certified below the essential threshold {sigma_ess:.8} (margin {margin:.2e})")]
    NotBelowEssential {
        sigma: f64,
        sigma_ess: f64,
        margin: f64,
    },

    #[error("decay rate eta = {eta} outside [0, {eta_bound})")]
    EtaOutOfRange { eta: f64, eta_bound: f64 },

    #[error("only {usable} usable shells in the tail (need at least 4)")]
    TailTooShort { usable: usize },

    #[error("localization assumption fails: no edge point below |a| Theta0")]
    AssumptionFails,

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Range(_) | Error::InvalidGrid(_) | Error::Io(_) | Error::EtaOutOfRange { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
