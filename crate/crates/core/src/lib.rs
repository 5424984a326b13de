//! Length-preserving, energy-decreasing IMEX-GSAV multistep schemes (orders
//! 1 to 5) for the Landau-Lifshitz equation on periodic domains.
//!
//! Layout:
//! - [`spectral`]: Fourier-pseudospectral grid, transforms, operators and norms.
//! - [`stepper`]: BDF/extrapolation tables, history, the linear solve strategies.
//! - [`sav`]: scalar auxiliary variable update, correction and unit-length projection.
//! - [`model`]: problem definitions (manufactured, self-reference, blow-up, uniform).
//! - [`experiments`]: time loop, convergence and blow-up studies.
//! - [`io`]: configuration files, CSV time series, binary snapshots.
//! - [`registry`]: name-to-factory tables used to select problems and solvers at runtime.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod registry;
pub mod sav;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};
