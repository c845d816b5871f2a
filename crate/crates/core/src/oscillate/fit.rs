use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{CoefficientSeries, Values};
use crate::error::{Error, Result};

const MIN_POINTS: usize = 8;

/// How [`fit_growth_exponent`] treats the sampled values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    /// Replace v(x) by max_{y≤x}|v(y)| before fitting: the estimate of an
    /// O(x^θ) exponent.
    SupEnvelope,
    /// Fit log|v(x)| directly.
    Direct,
}

/// Least-squares fit of Σ_{n≤x} f(n) ≈ c·x^s plus the growth exponent of
/// the residual |Σ − c·x^s|.
#[derive(Clone, Debug, Serialize)]
pub struct MomentFit {
    pub c: f64,
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// Log–log slope of the sup-envelope of the residual; 0 when the residual
    /// vanishes at every sample (see `residual_vanishes`).
    pub residual_exponent: f64,
    pub residual_vanishes: bool,
    pub sample_points: Vec<(f64, f64)>,
    /// Set when the fit is unusable for the claim it backs (e.g. c ≤ 0).
    pub flag: Option<String>,
}

/// Ordinary least squares y = a + b·x; returns (a, b, stderr of b).
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (intercept, slope, stderr)
}

fn envelope(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut best = 0.0f64;
    values
        .into_iter()
        .map(|v| {
            best = best.max(v.abs());
            best
        })
        .collect()
}

/// Log–log slope of positive samples; `None` if fewer than 8 remain.
fn log_log_slope(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|(x, v)| *x > 0.0 && *v > 0.0)
        .map(|(x, v)| (x.ln(), v.ln()))
        .unzip();
    (xs.len() >= MIN_POINTS).then(|| least_squares(&xs, &ys))
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < MIN_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_POINTS,
            got: points.len(),
        });
    }
    if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::InvalidArgument(
            "x values must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Fits log|v| = log c + s·log x. Points with v = 0 carry no information
/// on a log scale and are dropped; at least 8 must remain.
pub fn fit_growth_exponent(points: &[(f64, f64)], mode: FitMode) -> Result<MomentFit> {
    check_points(points)?;
    let transformed: Vec<(f64, f64)> = match mode {
        FitMode::Direct => points.iter().map(|&(x, v)| (x, v.abs())).collect(),
        FitMode::SupEnvelope => points
            .iter()
            .map(|p| p.0)
            .zip(envelope(points.iter().map(|p| p.1)))
            .collect(),
    };
    let usable = transformed.iter().filter(|(_, v)| *v > 0.0).count();
    let (intercept, slope, stderr) =
        log_log_slope(&transformed).ok_or(Error::InsufficientData {
            needed: MIN_POINTS,
            got: usable,
        })?;
    let c = intercept.exp();
    let residuals: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, v)| (x, v.abs() - c * x.powf(slope)))
        .collect();
    let (residual_exponent, residual_vanishes) = residual_growth(&residuals, |x| c * x.powf(slope));
    Ok(MomentFit {
        c,
        exponent: slope,
        exponent_stderr: stderr,
        residual_exponent,
        residual_vanishes,
        sample_points: points.to_vec(),
        flag: None,
    })
}

/// Sup-envelope slope of residuals; treats residuals below 1e-12 of the
/// model as zero.
fn residual_growth(residuals: &[(f64, f64)], model: impl Fn(f64) -> f64) -> (f64, bool) {
    let cleaned: Vec<(f64, f64)> = residuals
        .iter()
        .map(|&(x, r)| {
            (
                x,
                if r.abs() <= 1e-12 * model(x).abs().max(1.0) {
                    0.0
                } else {
                    r
                },
            )
        })
        .collect();
    let env: Vec<(f64, f64)> = cleaned
        .iter()
        .map(|p| p.0)
        .zip(envelope(cleaned.iter().map(|p| p.1)))
        .collect();
    if env.iter().all(|p| p.1 == 0.0) {
        return (0.0, true);
    }
    match log_log_slope(&env) {
        Some((_, slope, _)) => (slope, false),
        None => (f64::NAN, false),
    }
}

/// Neumaier-compensated running sum.
struct Compensated {
    sum: f64,
    err: f64,
}

impl Compensated {
    fn new() -> Self {
        Compensated { sum: 0.0, err: 0.0 }
    }

    fn add(&mut self, x: f64) -> f64 {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.err += (self.sum - t) + x;
        } else {
            self.err += (x - t) + self.sum;
        }
        self.sum = t;
        self.sum + self.err
    }
}

/// Running sums S(x) = Σ_{n≤x} a(n) for every x ≤ N.
///
/// Exact series give exact sums; floats use compensated summation.
pub fn partial_sums(seq: &CoefficientSeries) -> Result<CoefficientSeries> {
    let label = format!("S[{}]", seq.label());
    let values = match seq.values() {
        Values::Integer(v) => {
            let mut acc = 0i64;
            let sums: Option<Vec<i64>> = v
                .iter()
                .map(|&x| {
                    acc = acc.checked_add(x)?;
                    Some(acc)
                })
                .collect();
            match sums {
                Some(s) => Values::Integer(s),
                None => return partial_sums(&seq.to_rational()?),
            }
        }
        Values::Rational(v) => {
            let mut acc = BigRational::zero();
            Values::Rational(
                v.iter()
                    .map(|x| {
                        acc += x;
                        acc.clone()
                    })
                    .collect(),
            )
        }
        Values::Real(v) => {
            let mut acc = Compensated::new();
            Values::Real(v.iter().map(|&x| acc.add(x)).collect())
        }
        Values::Complex(v) => {
            let (mut re, mut im) = (Compensated::new(), Compensated::new());
            Values::Complex(
                v.iter()
                    .map(|z| Complex64::new(re.add(z.re), im.add(z.im)))
                    .collect(),
            )
        }
    };
    Ok(CoefficientSeries::new(label, values, false))
}

/// Fits S(x) = c·x through the origin over `x_points` and measures the
/// residual's sup-envelope over every n ≤ max x, sampled at `x_points`.
fn linear_moment_fit(prefix: &[f64], x_points: &[usize]) -> Result<MomentFit> {
    if x_points.len() < MIN_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_POINTS,
            got: x_points.len(),
        });
    }
    if x_points.windows(2).any(|w| w[0] >= w[1]) || x_points[0] == 0 {
        return Err(Error::InvalidArgument(
            "x points must be positive and strictly increasing".into(),
        ));
    }
    let last = *x_points.last().unwrap();
    if last >= prefix.len() {
        return Err(Error::Range {
            start: x_points[0],
            end: last,
            limit: prefix.len() - 1,
        });
    }
    let (sxs, sxx) = x_points.iter().fold((0.0, 0.0), |(a, b), &x| {
        let xf = x as f64;
        (a + xf * prefix[x], b + xf * xf)
    });
    let c = sxs / sxx;
    // running envelope of |S(n) − c·n| over all n
    let mut env = 0.0f64;
    let mut residual_points = Vec::with_capacity(x_points.len());
    let mut next = 0;
    for n in 1..=last {
        let r = prefix[n] - c * n as f64;
        if r.abs() > 1e-12 * (c * n as f64).abs().max(1.0) {
            env = env.max(r.abs());
        }
        if n == x_points[next] {
            residual_points.push((n as f64, env));
            next += 1;
        }
    }
    let (residual_exponent, residual_vanishes) = if residual_points.iter().all(|p| p.1 == 0.0) {
        (0.0, true)
    } else {
        match log_log_slope(&residual_points) {
            Some((_, slope, _)) => (slope, false),
            None => (f64::NAN, false),
        }
    };
    let flag = (c <= 0.0).then(|| format!("fitted slope c = {c} is not positive"));
    Ok(MomentFit {
        c,
        exponent: 1.0,
        exponent_stderr: 0.0,
        residual_exponent,
        residual_vanishes,
        sample_points: x_points.iter().map(|&x| (x as f64, prefix[x])).collect(),
        flag,
    })
}

/// Σ_{n≤x} a(n)² = c·x + residual; flags c ≤ 0.
pub fn second_moment_fit(seq: &CoefficientSeries, x_points: &[usize]) -> Result<MomentFit> {
    let values = seq.real_values()?;
    let mut acc = Compensated::new();
    let prefix: Vec<f64> = values.iter().map(|&v| acc.add(v * v)).collect();
    linear_moment_fit(&prefix, x_points)
}

/// Σ_{n≤x} a(n) = c·x + residual, for sequences with a mean value such as
/// Rankin–Selberg coefficients; flags c ≤ 0.
pub fn first_moment_fit(seq: &CoefficientSeries, x_points: &[usize]) -> Result<MomentFit> {
    let prefix = partial_sums(seq)?.real_values()?;
    linear_moment_fit(&prefix, x_points)
}

/// Distinct integers round(x_min·ρ^j) in [x_min, x_max].
pub fn geometric_points(x_min: usize, x_max: usize, ratio: f64) -> Result<Vec<usize>> {
    if x_min == 0 || x_min > x_max {
        return Err(Error::InvalidArgument(format!(
            "bad range [{x_min}, {x_max}]"
        )));
    }
    if !(ratio > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid ratio must exceed 1, got {ratio}"
        )));
    }
    let mut out = Vec::new();
    let mut x = x_min as f64;
    while x.round() <= x_max as f64 {
        let xi = x.round() as usize;
        if out.last() != Some(&xi) {
            out.push(xi);
        }
        x *= ratio;
    }
    Ok(out)
}
