//! A-priori smoothness analysis via the method of characteristics.
//!
//! Classifies scalar problems (smooth forever, blow-up at a computable time,
//! or discontinuous from the start), computes the blow-up time from the
//! crossing of characteristic lines, and generalizes to systems through the
//! per-wave Riccati coefficients built from the flux Jacobian eigenstructure.
//!
//! The sup/inf in the blow-up formulas are evaluated over dense per-piece
//! samples plus one-sided limits at breakpoints. Catalog pieces are analytic,
//! so sampled evaluation is controlled and breakpoints are the only non-smooth
//! extremum candidates. This is sampled evaluation, not an interval-arithmetic
//! enclosure.

mod classify;
mod profile;
mod taylor;

pub use classify::{
    classify_scalar, refine_with_frames, smoothness_order, wave_blowup_times, Classification,
    SmoothnessReport, WaveBlowup, N_CAP,
};
pub use profile::{InitialData, Piece, Profile1d, Profile2d};
pub use taylor::Taylor;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CharError {
    #[error("operation requires a scalar system")]
    NotScalar,
    #[error("operation requires an m > 1 system")]
    NotSystem,
    #[error("bad initial-data descriptor: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    Pde(#[from] pde_core::PdeError),
}
