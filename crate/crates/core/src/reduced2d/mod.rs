//! The reduced half-plane operators `-(∇ - iA)² + V_τ` of a step field
//! whose discontinuity plane meets the boundary at angle `α`, with the
//! field tilted by `γ` from the normal of the boundary.

mod band;
mod gauge;
mod params;
mod spectral;

pub use band::{
    band_limits, band_profile, lambda, lambda_bound, tau_window, BandProfile, Verdict, DEFAULT_SAMPLES,
    ENDPOINT_TOL, TAU_TOL,
};
pub use gauge::StepGauge;
pub use params::{potential_minimum_set, MinimumSet, MinimumSetKind, StepFieldParams, GAMMA_SLACK, MIN_SIN_ALPHA};
pub use spectral::{
    assemble_reduced, eigenfunction, reduced_box, sigma, sigma_ess, Eigenstate, SpectralResult, GUARD,
    WALL_BAND, WALL_MASS_TOL,
};
