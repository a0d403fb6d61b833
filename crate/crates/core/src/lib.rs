//! Trace distance discord of two-qubit states.
//!
//! The discord measured on qubit A is half the smallest trace-norm change a
//! projective measurement on A can cause. [`tdd::tdd`] computes it through
//! closed forms where the state allows and through a two-angle minimization
//! otherwise; [`oracle`] evaluates the definition by brute force.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod oracle;
pub mod spinchain;
pub mod state;
pub mod tdd;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix4, RealMatrix3, Vec3, C64};
pub use state::{BlochForm, DensityMatrix, StateClass};
pub use tdd::{tdd, tdd_closed, tdd_left, MinimizerConfig, Method, TddResult};
