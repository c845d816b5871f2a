//! Coefficient sequences of automorphic L-functions and the machinery to
//! measure how they oscillate.
//!
//! The crate is organised bottom-up:
//! - [`arith`]: sieved arithmetic tables, [`CoefficientSeries`] and Dirichlet
//!   convolution.
//! - [`euler`]: local Euler factors from Satake parameters, global assembly,
//!   Rankin–Selberg and symmetric-power local data, synthetic parameters.
//! - [`gl2`]: exact Ramanujan τ via a multi-modular q-expansion, Satake angles
//!   and symmetric powers of level-1 eigenforms.
//! - [`siegel`]: genus-2 spinor coefficients, normalized eigenvalues and
//!   ingestion of externally computed eigenvalue tables.
//! - [`oscillate`]: sign-change windows, cumulative counts, partial sums,
//!   moment and growth-exponent fits, and the exponent presets.

pub mod arith;
pub mod error;
pub mod euler;
pub mod gl2;
pub mod oscillate;
pub mod siegel;

pub use arith::{CoefficientSeries, SieveTables, Values};
pub use error::{Error, Result};
