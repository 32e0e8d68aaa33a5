//! Capillary rise in a narrow slit: fluid parameters, reduced-order rise
//! models, scalings, and cost estimates for explicit grid solvers.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ode;
pub mod physics;
pub mod scaling;
pub mod study;
pub mod trajectory;

pub use error::{Error, Result};
pub use physics::{CaseSpec, FluidPair, Geometry, SlipSpec};
pub use trajectory::{Representation, Sample, Trajectory, TrajectoryMeta};
