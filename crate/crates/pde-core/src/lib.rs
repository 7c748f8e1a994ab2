//! Registered hyperbolic PDE systems: fluxes, flux Jacobians, eigenstructure,
//! and state-validity predicates.
//!
//! Six systems are available: linear advection, inviscid Burgers, and the
//! compressible Euler equations, each in 1D and 2D. Every operation is a pure
//! function of its inputs; there is no shared mutable state anywhere in the
//! crate, so values can be used freely across threads.

mod mat;
mod system;

pub use mat::Mat;
pub use system::{
    make_system, ConservedState, Direction, EigenDecomp, Params, PdeError, PdeSystem, Primitive,
    SystemName,
};
