//! Executes an [`ExperimentConfig`] and writes its reports.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use automorph::arith::{divisor_bound_violations, divisor_function};
use automorph::euler::{assemble_series, rankin_selberg_data, synth_satake, SatakeData, PARAM_TOL};
use automorph::gl2::{delta_q_expansion, satake_angles, symmetric_power_data};
use automorph::oscillate::{
    cumulative_sign_changes, first_moment_fit, fit_cumulative, fit_growth_exponent,
    geometric_points, partial_sums, scan_windows, second_moment_fit, write_cumulative_csv, FitMode,
    MomentFit,
};
use automorph::siegel::{
    ingest_eigenvalues, normalized_eigenvalues, spinor_satake, spinor_series, synth_spinor_triples,
};
use automorph::CoefficientSeries;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Source, Task};

/// Slack allowed above a predicted exponent before a fit counts as a failure.
pub const EXPONENT_SLACK: f64 = 0.05;
const RANKIN_TOL: f64 = 1e-9;

/// Series and Euler data for one run.
struct Prepared {
    /// The sequence whose signs and moments are examined.
    sequence: CoefficientSeries,
    /// L-function data for Rankin–Selberg checks.
    satake: Option<SatakeData>,
    /// (series, l) pairs to test against |a(n)| ≤ d_l(n).
    divisor_checks: Vec<(CoefficientSeries, u32)>,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let n = config.limit;
    Ok(match &config.source {
        Source::Delta => {
            let f = delta_q_expansion(n)?;
            let sequence = f.normalized_series();
            Prepared {
                satake: Some(satake_angles(&f, n)?),
                divisor_checks: vec![(sequence.clone(), 2)],
                sequence,
            }
        }
        Source::SymK { j } => {
            let f = delta_q_expansion(n)?;
            let data = symmetric_power_data(&f, *j, n)?;
            let sequence = assemble_series(&data, n)?
                .into_real(PARAM_TOL)?
                .with_label(format!("sym{j}(delta)"));
            Prepared {
                satake: Some(data),
                divisor_checks: vec![(sequence.clone(), j + 1)],
                sequence,
            }
        }
        Source::Synthetic { m, model, seed } => {
            let data = synth_satake(*m, n, *model, *seed)?;
            let sequence = assemble_series(&data, n)?.into_real(PARAM_TOL)?;
            Prepared {
                satake: Some(data),
                divisor_checks: vec![(sequence.clone(), *m as u32)],
                sequence,
            }
        }
        Source::SpinorSynthetic { seed, symplectic } => {
            let triples = synth_spinor_triples(n, *seed, *symplectic)?;
            let a_f = spinor_series(&triples, n)?;
            let sequence = normalized_eigenvalues(&a_f)?;
            Prepared {
                satake: Some(spinor_satake(&triples)?),
                divisor_checks: vec![(a_f, 4), (sequence.clone(), 5)],
                sequence,
            }
        }
        Source::SpinorIngest { path, weight } => {
            let data = ingest_eigenvalues(path, *weight)?;
            if data.limit < n {
                anyhow::bail!("{} covers n <= {}, but N = {n}", path.display(), data.limit);
            }
            if !data.missing.is_empty() {
                eprintln!(
                    "warning: {} has no value for {} of {} indices (gap fraction {:.4})",
                    path.display(),
                    data.missing.len(),
                    data.limit,
                    data.gap_fraction()
                );
            }
            let sequence = truncate(&data.normalized_series(), n);
            Prepared {
                satake: None,
                divisor_checks: vec![(sequence.clone(), 5)],
                sequence,
            }
        }
    })
}

fn truncate(series: &CoefficientSeries, n: usize) -> CoefficientSeries {
    if series.limit() == n {
        return series.clone();
    }
    let values = series.real_values().expect("ingested series are real");
    let missing = series
        .missing()
        .iter()
        .copied()
        .filter(|&k| k <= n)
        .collect();
    CoefficientSeries::from_real(series.label(), values[1..=n].iter().copied())
        .with_missing(missing)
}

fn rational(q: Rational64) -> Value {
    json!({ "exact": q.to_string(), "value": q.to_f64() })
}

fn fit_json(fit: &MomentFit) -> Value {
    json!({
        "c": fit.c,
        "exponent": fit.exponent,
        "exponent_stderr": fit.exponent_stderr,
        "residual_exponent": fit.residual_exponent,
        "residual_vanishes": fit.residual_vanishes,
        "flag": fit.flag,
    })
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

struct TaskResult {
    passed: bool,
    csv: Vec<u8>,
    details: Value,
}

fn run_windows(config: &ExperimentConfig, seq: &CoefficientSeries) -> Result<TaskResult> {
    let r = config.profile.r;
    let x_max = match config.x_max {
        Some(x) => x,
        None => (1..=config.limit)
            .rev()
            .find(|&x| x + (x as f64).powf(r).ceil() as usize <= config.limit)
            .context("N is too small for a single window")?,
    };
    let report = scan_windows(seq, &config.profile, config.x_min, x_max, config.ratio)?;
    let mut csv = Vec::new();
    report.write_windows_csv(&mut csv)?;
    let max_gap = report
        .windows
        .iter()
        .map(|w| w.gap_fraction)
        .fold(0.0, f64::max);
    Ok(TaskResult {
        passed: report.x0.is_some(),
        csv,
        details: json!({
            "x_min": config.x_min,
            "x_max": x_max,
            "window_count": report.windows.len(),
            "fraction_with_change": report.fraction_with_change,
            "x0": report.x0,
            "max_gap_fraction": max_gap,
            "criterion": "every window from x0 to x_max contains a sign change",
        }),
    })
}

fn run_cumulative(config: &ExperimentConfig, seq: &CoefficientSeries) -> Result<TaskResult> {
    let cumulative = cumulative_sign_changes(seq, config.x_min, config.limit, config.ratio)?;
    let mut csv = Vec::new();
    write_cumulative_csv(&cumulative, &mut csv)?;
    let target = 1.0 - config.profile.r - EXPONENT_SLACK;
    let (passed, fit) = match fit_cumulative(&cumulative) {
        Ok(fit) => (fit.exponent >= target, fit_json(&fit)),
        Err(flag) => (false, json!({ "flag": flag })),
    };
    Ok(TaskResult {
        passed,
        csv,
        details: json!({
            "total": cumulative.last().map(|c| c.1),
            "fit": fit,
            "required_exponent_min": target,
        }),
    })
}

fn run_moments(config: &ExperimentConfig, seq: &CoefficientSeries) -> Result<TaskResult> {
    let points = geometric_points(config.fit_min, config.limit, config.ratio)?;
    let second = second_moment_fit(seq, &points)?;
    let sums = partial_sums(seq)?.real_values()?;
    let sampled: Vec<(f64, f64)> = points.iter().map(|&x| (x as f64, sums[x])).collect();
    let first = fit_growth_exponent(&sampled, FitMode::SupEnvelope)?;
    let profile = &config.profile;
    let beta_max = profile.beta.to_f64().unwrap_or(f64::NAN) + EXPONENT_SLACK;
    let gamma_max = profile.gamma.to_f64().unwrap_or(f64::NAN) + EXPONENT_SLACK;
    let passed = second.flag.is_none()
        && second.c > 0.0
        && second.residual_exponent <= gamma_max
        && first.exponent <= beta_max;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "partial_sum", "second_moment"])?;
    for (&(x, s1), &(_, s2)) in sampled.iter().zip(&second.sample_points) {
        w.write_record([
            (x as usize).to_string(),
            format!("{s1:?}"),
            format!("{s2:?}"),
        ])?;
    }
    Ok(TaskResult {
        passed,
        csv: w.into_inner()?,
        details: json!({
            "partial_sum_envelope": fit_json(&first),
            "partial_sum_exponent_max": beta_max,
            "second_moment": fit_json(&second),
            "second_moment_residual_max": gamma_max,
        }),
    })
}

fn run_rankin(config: &ExperimentConfig, satake: &SatakeData) -> Result<TaskResult> {
    let n = config.limit;
    let a = assemble_series(satake, n)?.complex_values();
    let rs_data = rankin_selberg_data(satake, &satake.unitary_contragredient()?)?;
    let rs = assemble_series(&rs_data, n)?
        .into_real(PARAM_TOL)?
        .with_label("rankin-selberg");
    let rs_values = rs.real_values()?;
    let mut violations = Vec::new();
    let mut prime_gap = 0.0f64;
    for k in 1..=n {
        let lhs = a[k].norm_sqr();
        if lhs > rs_values[k] + RANKIN_TOL * rs_values[k].abs().max(1.0) {
            violations.push(k);
        }
        if satake.get(k as u64).is_some() {
            prime_gap = prime_gap.max((lhs - rs_values[k]).abs() / lhs.max(1.0));
        }
    }
    let points = geometric_points(config.fit_min, n, config.ratio)?;
    let fit = first_moment_fit(&rs, &points)?;
    let passed = violations.is_empty() && prime_gap <= RANKIN_TOL && fit.flag.is_none();

    let sums_a = {
        let mut acc = 0.0;
        let mut out = vec![0.0; n + 1];
        for k in 1..=n {
            acc += a[k].norm_sqr();
            out[k] = acc;
        }
        out
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "sum_abs_sq", "sum_rankin_selberg"])?;
    for (x, s) in &fit.sample_points {
        w.write_record([
            (*x as usize).to_string(),
            format!("{:?}", sums_a[*x as usize]),
            format!("{s:?}"),
        ])?;
    }
    Ok(TaskResult {
        passed,
        csv: w.into_inner()?,
        details: json!({
            "violations": violations.len(),
            "first_violation": violations.first(),
            "max_prime_relative_gap": prime_gap,
            "first_moment": fit_json(&fit),
        }),
    })
}

fn run_divisor(checks: &[(CoefficientSeries, u32)]) -> Result<TaskResult> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "n", "value", "bound"])?;
    let mut details = Vec::new();
    let mut passed = true;
    for (series, l) in checks {
        let bad = divisor_bound_violations(series, *l, RANKIN_TOL)?;
        let bound = divisor_function(*l, series.limit())?;
        for &k in &bad {
            w.write_record([
                series.label().to_string(),
                k.to_string(),
                format!("{:?}", series.complex(k).norm()),
                bound.integer(k).unwrap_or(0).to_string(),
            ])?;
        }
        passed &= bad.is_empty();
        details.push(json!({ "series": series.label(), "l": l, "violations": bad.len() }));
    }
    Ok(TaskResult {
        passed,
        csv: w.into_inner()?,
        details: Value::Array(details),
    })
}

/// Runs every task, writing `<label>-<task>.csv` and `<label>-summary.json`
/// into the output directory. An empty task list writes nothing.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    if config.tasks.is_empty() {
        return Ok(Outcome {
            passed: true,
            files: Vec::new(),
            summary: Value::Null,
        });
    }
    let prepared = prepare(config)?;
    let mut results = serde_json::Map::new();
    let mut outputs = Vec::new();
    let mut passed = true;
    for &task in &config.tasks {
        let result = match task {
            Task::Windows => run_windows(config, &prepared.sequence)?,
            Task::Cumulative => run_cumulative(config, &prepared.sequence)?,
            Task::Moments => run_moments(config, &prepared.sequence)?,
            Task::RankinCheck => {
                run_rankin(config, prepared.satake.as_ref().context("no Satake data")?)?
            }
            Task::DivisorBoundCheck => run_divisor(&prepared.divisor_checks)?,
        };
        passed &= result.passed;
        results.insert(
            task.name().into(),
            json!({ "passed": result.passed, "details": result.details }),
        );
        outputs.push((
            config
                .outputs
                .join(format!("{}-{}.csv", config.label, task.name())),
            result.csv,
        ));
    }

    let p = &config.profile;
    let summary = json!({
        "label": config.label,
        "settings": config.settings,
        "sequence": prepared.sequence.label(),
        "N": config.limit,
        "seed": config.source.seed(),
        "gap_fraction": prepared.sequence.missing().len() as f64 / config.limit as f64,
        "profile": {
            "name": p.name,
            "alpha": rational(p.alpha),
            "beta": rational(p.beta),
            "gamma": rational(p.gamma),
            "threshold": rational(p.threshold()),
            "r": p.r,
            "epsilon": p.epsilon,
            "valid": p.is_valid(),
            "provenance": p.provenance,
        },
        "tasks": results,
        "passed": passed,
    });
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    outputs.push((
        config
            .outputs
            .join(format!("{}-summary.json", config.label)),
        text.into_bytes(),
    ));

    std::fs::create_dir_all(&config.outputs).with_context(|| {
        format!(
            "cannot create output directory {}",
            config.outputs.display()
        )
    })?;
    let mut files = Vec::new();
    for (path, bytes) in outputs {
        write_atomic(&path, &bytes)?;
        files.push(path);
    }
    Ok(Outcome {
        passed,
        files,
        summary,
    })
}
