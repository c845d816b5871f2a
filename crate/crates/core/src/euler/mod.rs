//! Local Euler factors from Satake parameters and their assembly into global
//! coefficient series.
//!
//! All parameters are double-precision complex numbers in the unitary
//! (analytic) normalization; only unramified data is modelled.

mod assemble;
mod local;
mod satake;
mod synth;

pub use assemble::{assemble_series, rankin_selberg_data};
pub use local::{expand_local_factor, rankin_selberg_local, symmetric_power_local};
pub use satake::SatakeData;
pub use synth::{synth_satake, SynthModel};

/// Absolute tolerance for unitarity and parameter-product checks.
pub const PARAM_TOL: f64 = 1e-9;

/// Largest k with p^k ≤ limit (0 when p > limit).
pub fn max_exponent(p: u64, limit: u64) -> u32 {
    let mut k = 0;
    let mut q = p;
    while q <= limit {
        k += 1;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    k
}
