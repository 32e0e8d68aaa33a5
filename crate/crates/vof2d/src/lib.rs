//! Two-phase geometric VOF solver for liquid rising between two plates,
//! simulated on the half gap next to a symmetry plane.
//!
//! Staggered Cartesian grid, explicit Euler with a pressure projection,
//! PLIC advection in alternating directional sweeps, height-function
//! curvature with a contact-angle ghost column and CSF surface tension.
//! The wall either slips numerically (no-slip ghost) or obeys a Navier
//! condition with a prescribed slip length.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature;
pub mod error;
pub mod grid;
pub mod init;
pub mod plic;
pub mod pressure;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Array2, Grid};
pub use plic::{plic_reconstruct, PlicPlane};
pub use solver::{
    advect_alpha, apex_height, apply_boundaries, compute_dt, init_case, momentum_step,
    pressure_solve, run, BottomBoundary, CaseSetup2D, RunDiagnostics, RunOutput, SimState,
    Simulation, StepReport,
};
