//! Sieved arithmetic tables and the coefficient-series primitives every
//! generator builds on.

mod convolve;
mod series;
mod sieve;

pub use convolve::{dirichlet_convolve, mobius_scaled_convolve, zeta_shift_series};
pub use series::{CoefficientSeries, Values};
pub use sieve::{
    assemble_multiplicative, build_sieve, divisor_bound_violations, divisor_function, SieveTables,
};
