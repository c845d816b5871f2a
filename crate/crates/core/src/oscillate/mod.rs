//! The sign-change criterion and its empirical instrumentation: window
//! scans, cumulative counts, partial sums, moment fits and the exponent
//! presets.
//!
//! A real sequence with a(n) = O(n^α), Σ_{n≤x} a(n) = O(x^β) and
//! Σ_{n≤x} a(n)² = cx + O(x^γ), where α + β < 1, changes sign in every window
//! [x, x + x^r] for large x as soon as max{α + β, γ} < r < 1.

mod fit;
mod profile;
mod windows;

pub use fit::{
    first_moment_fit, fit_growth_exponent, geometric_points, partial_sums, second_moment_fit,
    FitMode, MomentFit,
};
pub use profile::{
    coefficient_bound_exponent, partial_sum_eta, partial_sum_exponent, preset, preset_profiles,
    ExponentProfile, DEFAULT_EPSILON,
};
pub use windows::{
    cumulative_sign_changes, fit_cumulative, scan_windows, sign_changes_window,
    write_cumulative_csv, WindowReport, WindowRow, DEFAULT_RATIO,
};
