use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::fit::{fit_growth_exponent, geometric_points, FitMode, MomentFit};
use super::profile::ExponentProfile;
use crate::arith::CoefficientSeries;
use crate::error::{Error, Result};

/// Default ratio of the geometric window grid.
pub const DEFAULT_RATIO: f64 = 1.1;

/// One scanned window [x, x + ⌊x^r⌋].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowRow {
    pub x: usize,
    /// ⌊x^r⌋, so the window covers `window_len + 1` indices.
    pub window_len: usize,
    pub changes: u64,
    /// Fraction of indices in the window with no data.
    pub gap_fraction: f64,
}

#[derive(Clone, Debug)]
pub struct WindowReport {
    pub profile: ExponentProfile,
    pub windows: Vec<WindowRow>,
    /// (x, sign changes among n ≤ x) on the same grid.
    pub cumulative: Vec<(usize, u64)>,
    pub fraction_with_change: f64,
    /// Smallest grid point from which every scanned window has a change.
    pub x0: Option<usize>,
    pub cumulative_fit: Option<MomentFit>,
    /// Why `cumulative_fit` is absent, if it is.
    pub cumulative_flag: Option<String>,
}

impl WindowReport {
    pub fn all_windows_change_from(&self, x: usize) -> bool {
        self.windows
            .iter()
            .filter(|w| w.x >= x)
            .all(|w| w.changes > 0)
    }

    pub fn write_windows_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "window_len", "changes", "gap_fraction"])?;
        for row in &self.windows {
            w.write_record([
                row.x.to_string(),
                row.window_len.to_string(),
                row.changes.to_string(),
                format!("{:?}", row.gap_fraction),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_cumulative_csv<W: Write>(&self, out: W) -> Result<()> {
        write_cumulative_csv(&self.cumulative, out)
    }
}

pub fn write_cumulative_csv<W: Write>(cumulative: &[(usize, u64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "cumulative"])?;
    for (x, c) in cumulative {
        w.write_record([x.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn window_end(x: usize, r: f64) -> usize {
    x + (x as f64).powf(r).floor() as usize
}

fn check_window(x: usize, r: f64, limit: usize) -> Result<usize> {
    if x == 0 {
        return Err(Error::InvalidArgument(
            "window start must be positive".into(),
        ));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window exponent must lie in (0, 1), got {r}"
        )));
    }
    let end = window_end(x, r);
    if x + (x as f64).powf(r).ceil() as usize > limit {
        return Err(Error::Range {
            start: x,
            end,
            limit,
        });
    }
    Ok(end)
}

/// Opposite-sign transitions between consecutive nonzero signs in
/// `signs[start..=end]`.
fn count_changes(signs: &[i8], start: usize, end: usize) -> u64 {
    let mut last = 0i8;
    let mut changes = 0;
    for &s in &signs[start..=end] {
        if s != 0 {
            if s == -last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Sign changes of `seq` inside [x, x + x^r]. Zero and missing entries are
/// skipped when pairing neighbours.
pub fn sign_changes_window(seq: &CoefficientSeries, x: usize, r: f64) -> Result<u64> {
    let end = check_window(x, r, seq.limit())?;
    Ok(count_changes(&seq.signs()?, x, end))
}

fn cumulative_from_signs(signs: &[i8], grid: &[usize]) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(grid.len());
    let mut next = grid.iter().peekable();
    let (mut last, mut total) = (0i8, 0u64);
    for (n, &s) in signs.iter().enumerate().skip(1) {
        if s != 0 {
            if s == -last {
                total += 1;
            }
            last = s;
        }
        while next.peek() == Some(&&n) {
            out.push((n, total));
            next.next();
        }
        if next.peek().is_none() {
            break;
        }
    }
    out
}

/// Total sign changes among n ≤ x for x on the geometric grid, by a single
/// linear scan.
pub fn cumulative_sign_changes(
    seq: &CoefficientSeries,
    x_min: usize,
    x_max: usize,
    ratio: f64,
) -> Result<Vec<(usize, u64)>> {
    if x_max > seq.limit() {
        return Err(Error::Range {
            start: x_min,
            end: x_max,
            limit: seq.limit(),
        });
    }
    let grid = geometric_points(x_min, x_max, ratio)?;
    Ok(cumulative_from_signs(&seq.signs()?, &grid))
}

/// Fits the growth exponent of a cumulative count, or explains why not.
pub fn fit_cumulative(cumulative: &[(usize, u64)]) -> std::result::Result<MomentFit, String> {
    let points: Vec<(f64, f64)> = cumulative
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|&(x, c)| (x as f64, c as f64))
        .collect();
    if points.is_empty() {
        return Err("no sign changes: cumulative exponent undefined".into());
    }
    fit_growth_exponent(&points, FitMode::Direct)
        .map_err(|e| format!("cumulative fit unavailable: {e}"))
}

/// Scans windows [x, x + x^r] at x = x_min·ρ^j ≤ x_max, with r taken from
/// `profile`, which must satisfy the validity predicate.
pub fn scan_windows(
    seq: &CoefficientSeries,
    profile: &ExponentProfile,
    x_min: usize,
    x_max: usize,
    ratio: f64,
) -> Result<WindowReport> {
    if let Some(message) = profile.validity_error() {
        return Err(Error::InvalidArgument(format!(
            "profile {}: {message}",
            profile.name
        )));
    }
    let r = profile.r;
    check_window(x_max, r, seq.limit())?;
    let grid = geometric_points(x_min, x_max, ratio)?;
    let signs = seq.signs()?;
    let windows: Vec<WindowRow> = grid
        .par_iter()
        .map(|&x| {
            let end = window_end(x, r);
            WindowRow {
                x,
                window_len: end - x,
                changes: count_changes(&signs, x, end),
                gap_fraction: seq.missing_in(x, end) as f64 / (end - x + 1) as f64,
            }
        })
        .collect();
    let cumulative = cumulative_from_signs(&signs, &grid);
    let hits = windows.iter().filter(|w| w.changes > 0).count();
    let x0 = windows
        .iter()
        .rposition(|w| w.changes == 0)
        .map_or(Some(0), |i| {
            if i + 1 < windows.len() {
                Some(i + 1)
            } else {
                None
            }
        })
        .map(|i| windows[i].x);
    let (cumulative_fit, cumulative_flag) = match fit_cumulative(&cumulative) {
        Ok(fit) => (Some(fit), None),
        Err(flag) => (None, Some(flag)),
    };
    Ok(WindowReport {
        profile: profile.clone(),
        fraction_with_change: hits as f64 / windows.len() as f64,
        windows,
        cumulative,
        x0,
        cumulative_fit,
        cumulative_flag,
    })
}
