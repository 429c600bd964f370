//! Driven atom chains coupled through a chiral waveguide, single-photon
//! excitation, solved with a three-level density-matrix hierarchy.

// NaN must fail the range checks, and the dense kernels read best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod model;
pub mod observables;
pub mod operator;
pub mod output;
pub mod oracles;
pub mod presets;
pub mod sweep;

pub use num_complex::Complex64 as C64;

pub use dynamics::{integrate, IntegratorSettings, Trajectory};
pub use error::{Error, Result};
pub use model::{AtomParams, ChainConfig, CouplingForm, PulseSpec};
pub use observables::AveragingMode;
pub use operator::Operator;
