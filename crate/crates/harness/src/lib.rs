//! Benchmark harness for the capillary-rise Ω study: the case registry,
//! trajectory comparison, suite execution with CSV/JSON export, and the
//! `caprise` command line.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cases;
pub mod cli;
pub mod compare;
pub mod error;
pub mod export;
pub mod suite;

pub use cases::{omega_suite, registry, SlipVariant};
pub use compare::{compare, DeviationMetrics};
pub use error::{Error, Result};
pub use suite::{run_suite, BenchResult, ModelChoice, ScalingChoice, SuiteOptions, SuiteReport};
