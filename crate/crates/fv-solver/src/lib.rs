//! Deterministic finite-volume reference solver for the registered
//! hyperbolic systems.
//!
//! Lax-Friedrichs and Roe numerical fluxes, optional second-order limited
//! reconstruction, CFL time stepping, unsplit stepping in 1D and Strang-split
//! stepping in 2D. A run produces a [`FrameSeries`] at uniformly spaced
//! output times; time steps are clipped to land on output times exactly, so
//! identical inputs give bit-identical outputs.

mod field;
mod flux;
mod grid;
mod io;
mod limiter;
mod run;
mod step;

pub use field::StateField;
pub use flux::{lax_friedrichs_flux, roe_average_exists, roe_flux};
pub use grid::{BoundaryKind, GridSpec};
pub use io::{read_series, write_series, SeriesManifest};
pub use limiter::{limiter_eval, limited_difference, LimiterKind};
pub use run::{output_times, run_simulation, FluxKind, FrameSeries, SolverConfig, SolverDescriptor};
pub use step::{step_1d, step_1d_detailed, step_2d, StepDiagnostics};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Pde(#[from] pde_core::PdeError),
    #[error("invalid state produced at cell {cell:?} (CFL/limiter failure)")]
    InvalidStateProduced { cell: Vec<usize> },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("grid/system mismatch: {0}")]
    Mismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed artifact: {0}")]
    Malformed(String),
}
