//! Spectral toolkit for Schrödinger operators with piecewise-constant
//! magnetic fields on half-spaces.

pub mod agmon;
pub mod context;
pub mod criterion;
pub mod edgeprofile;
pub mod eigencore;
pub mod error;
pub mod fiber1d;
pub mod minimize;
pub mod reduced2d;
pub mod zeta;

pub use context::{Context, Resolution};
pub use error::{Error, Result};
