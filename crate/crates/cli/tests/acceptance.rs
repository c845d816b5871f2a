//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report lines are always
//! printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use automorph::arith::{dirichlet_convolve, mobius_scaled_convolve, zeta_shift_series, Values};
use automorph::euler::{
    assemble_series, rankin_selberg_data, synth_satake, SatakeData, SynthModel,
};
use automorph::gl2::{delta_q_expansion, satake_angles, EigenformSeries};
use automorph::oscillate::{
    cumulative_sign_changes, first_moment_fit, fit_cumulative, geometric_points, preset,
    preset_profiles, scan_windows, second_moment_fit, sign_changes_window, DEFAULT_EPSILON,
    DEFAULT_RATIO,
};
use automorph::siegel::{normalized_eigenvalues, spinor_series, synth_spinor_triples};
use automorph::CoefficientSeries;
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};

const BIG_N: usize = 1_000_000;
const TAU_ORACLE_N: usize = 100;
const HECKE_N: usize = 10_000;
const C1_BUDGET: Duration = Duration::from_secs(10);
const C4_BUDGET: Duration = Duration::from_secs(120);
const REASSEMBLY_N: usize = 1000;
const REASSEMBLY_TOL: f64 = 1e-9;
const RANKIN_N: usize = 10_000;
const RANKIN_TOL: f64 = 1e-9;
const FIT_MIN: usize = 1000;
const RESIDUAL_MAX: f64 = 0.6 + 0.05;
const WINDOW_R: f64 = 0.61;
const WINDOW_X_MAX: usize = 100_000;
const X0_MAX: usize = 1000;
const CUMULATIVE_MIN: f64 = (1.0 - WINDOW_R) - 0.05;
const SPINOR_N: usize = 10_000;
const DIVISOR_TOL: f64 = 1e-9;
const DATASETS: u64 = 10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// q∏(1 − qⁿ)²⁴ to q^N by repeated multiplication by (1 − qⁿ).
fn tau_oracle(limit: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); limit];
    poly[0] = BigInt::one();
    for n in 1..limit {
        for _ in 0..24 {
            for k in (n..limit).rev() {
                let sub = poly[k - n].clone();
                poly[k] -= sub;
            }
        }
    }
    poly
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = delta_q_expansion(HECKE_N).map_err(|e| e.to_string())?;
    let oracle = tau_oracle(TAU_ORACLE_N);
    for n in 1..=TAU_ORACLE_N {
        ensure(f.coefficient(n) == &oracle[n - 1], || {
            format!("τ({n}) = {}, oracle {}", f.coefficient(n), oracle[n - 1])
        })?;
    }
    for (n, t) in [(2, -24), (4, -1472), (6, -6048)] {
        ensure(f.coefficient(n) == &BigInt::from(t), || {
            format!("τ({n}) != {t}")
        })?;
    }
    let mut checked = 0;
    let p11 = |p: usize| BigInt::from(p).pow(11);
    for p in (2..=HECKE_N).filter(|&p| is_prime(p)) {
        let mut prev = BigInt::one();
        let mut pk = p;
        while pk * p <= HECKE_N {
            let cur = f.coefficient(pk);
            let expected = f.coefficient(p) * cur - p11(p) * &prev;
            ensure(f.coefficient(pk * p) == &expected, || {
                format!("Hecke relation fails at {}", pk * p)
            })?;
            prev = cur.clone();
            pk *= p;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < C1_BUDGET, || {
        format!("took {elapsed:?}, budget {C1_BUDGET:?}")
    })?;
    Ok(format!(
        "τ(1..={TAU_ORACLE_N}) equal oracle; {checked} prime-power relations to {HECKE_N}; {elapsed:.2?}"
    ))
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn criterion_2(tau: &EigenformSeries) -> Outcome {
    let mut primes = 0;
    for p in (2..=HECKE_N).filter(|&p| is_prime(p)) {
        // |τ(p)| < 2p^{11/2}  ⇔  τ(p)² < 4p^{11}
        let lhs = tau.coefficient(p).pow(2);
        let rhs = BigInt::from(4) * BigInt::from(p).pow(11);
        ensure(lhs < rhs, || format!("|τ({p})| reaches 2p^(11/2)"))?;
        primes += 1;
    }
    let angles = satake_angles(tau, REASSEMBLY_N).map_err(|e| e.to_string())?;
    let series = assemble_series(&angles, REASSEMBLY_N).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for n in 1..=REASSEMBLY_N {
        let z = series.complex(n);
        let want = tau.normalized(n);
        let err = (z - want).norm() / want.abs();
        worst = worst.max(err);
    }
    ensure(worst < REASSEMBLY_TOL, || {
        format!("relative error {worst:e} at reassembly")
    })?;
    Ok(format!("{primes} primes below the bound; reassembly relative error {worst:.2e} for n <= {REASSEMBLY_N}"))
}

/// |a(n)|² ≤ a_{π×π̃}(n) for n ≤ N, with equality at primes.
fn rankin_check(data: &SatakeData, limit: usize) -> Result<(), String> {
    let a = assemble_series(data, limit).map_err(|e| e.to_string())?;
    let rs_data = rankin_selberg_data(
        data,
        &data.unitary_contragredient().map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let rs = assemble_series(&rs_data, limit).map_err(|e| e.to_string())?;
    for n in 1..=limit {
        let lhs = a.complex(n).norm_sqr();
        let r = rs.complex(n);
        let scale = r.norm().max(1.0);
        ensure(r.im.abs() <= RANKIN_TOL * scale, || {
            format!("{}: a_RS({n}) not real", data.model())
        })?;
        ensure(lhs <= r.re + RANKIN_TOL * scale, || {
            format!("{}: |a({n})|² = {lhs} > {}", data.model(), r.re)
        })?;
        if is_prime(n) {
            ensure((lhs - r.re).abs() <= RANKIN_TOL * scale, || {
                format!("{}: no equality at prime {n}", data.model())
            })?;
        }
    }
    Ok(())
}

fn criterion_3(tau_small: &EigenformSeries) -> Outcome {
    rankin_check(
        &satake_angles(tau_small, RANKIN_N).map_err(|e| e.to_string())?,
        RANKIN_N,
    )?;
    for k in 0..DATASETS {
        let (m, model) = match k % 4 {
            0 => (2, SynthModel::RamanujanUniform),
            1 => (2, SynthModel::SatoTate),
            _ => (3, SynthModel::RamanujanUniform),
        };
        let data = synth_satake(m, RANKIN_N, model, 1000 + k).map_err(|e| e.to_string())?;
        rankin_check(&data, RANKIN_N)?;
    }
    Ok(format!(
        "Δ and {DATASETS} synthetic GL2/GL3 datasets to n = {RANKIN_N}, equality at primes"
    ))
}

fn criterion_4(tau: &EigenformSeries, tau_time: Duration) -> Outcome {
    let start = Instant::now();
    let lambda = tau.normalized_series();
    let points = geometric_points(FIT_MIN, BIG_N, DEFAULT_RATIO).map_err(|e| e.to_string())?;
    let second = second_moment_fit(&lambda, &points).map_err(|e| e.to_string())?;
    ensure(second.flag.is_none() && second.c > 0.0, || {
        format!("second-moment slope {}", second.c)
    })?;
    ensure(second.residual_exponent <= RESIDUAL_MAX, || {
        format!(
            "second-moment residual exponent {}",
            second.residual_exponent
        )
    })?;
    let angles = satake_angles(tau, BIG_N).map_err(|e| e.to_string())?;
    let rs_data = rankin_selberg_data(
        &angles,
        &angles.unitary_contragredient().map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let rs = assemble_series(&rs_data, BIG_N)
        .and_then(|s| s.into_real(1e-9))
        .map_err(|e| e.to_string())?;
    let first = first_moment_fit(&rs, &points).map_err(|e| e.to_string())?;
    ensure(first.flag.is_none() && first.c > 0.0, || {
        format!("Rankin–Selberg slope {}", first.c)
    })?;
    ensure(first.residual_exponent <= RESIDUAL_MAX, || {
        format!(
            "Rankin–Selberg residual exponent {}",
            first.residual_exponent
        )
    })?;
    let elapsed = tau_time + start.elapsed();
    ensure(elapsed < C4_BUDGET, || {
        format!("took {elapsed:?}, budget {C4_BUDGET:?}")
    })?;
    Ok(format!(
        "Σλ² slope {:.4}, residual exponent {:.3}; RS slope {:.4}, residual exponent {:.3}; {elapsed:.2?} at N = {BIG_N}",
        second.c, second.residual_exponent, first.c, first.residual_exponent
    ))
}

fn criterion_5(tau: &EigenformSeries) -> Outcome {
    let lambda = tau.normalized_series();
    let profile = preset("gl2-selfdual", DEFAULT_EPSILON)
        .map_err(|e| e.to_string())?
        .with_r(WINDOW_R);
    let report = scan_windows(&lambda, &profile, 1, WINDOW_X_MAX, DEFAULT_RATIO)
        .map_err(|e| e.to_string())?;
    let x0 = report
        .x0
        .ok_or("the last sampled window has no sign change")?;
    ensure(x0 <= X0_MAX, || format!("x0 = {x0} exceeds {X0_MAX}"))?;
    ensure(report.all_windows_change_from(x0), || {
        "window without a change beyond x0".into()
    })?;
    let cumulative =
        cumulative_sign_changes(&lambda, 1, BIG_N, DEFAULT_RATIO).map_err(|e| e.to_string())?;
    let fit = fit_cumulative(&cumulative)?;
    ensure(fit.exponent >= CUMULATIVE_MIN, || {
        format!("cumulative exponent {}", fit.exponent)
    })?;
    Ok(format!(
        "x0 = {x0}, {} windows to {WINDOW_X_MAX} all change sign; cumulative exponent {:.3} >= {CUMULATIVE_MIN:.2}",
        report.windows.len(),
        fit.exponent
    ))
}

/// d_l(n) for n ≤ N by d_l = d_{l−1} * 1.
fn divisor_oracle(l: u32, limit: usize) -> Vec<u64> {
    let mut d = vec![1u64; limit + 1];
    for _ in 1..l {
        let mut next = vec![0u64; limit + 1];
        for a in 1..=limit {
            for m in (a..=limit).step_by(a) {
                next[m] += d[a];
            }
        }
        d = next;
    }
    d
}

fn criterion_6() -> Outcome {
    let d4 = divisor_oracle(4, SPINOR_N);
    let d5 = divisor_oracle(5, SPINOR_N);
    let zeta = zeta_shift_series(SPINOR_N, true).map_err(|e| e.to_string())?;
    for seed in 0..DATASETS {
        let triples =
            synth_spinor_triples(SPINOR_N, seed, seed % 2 == 0).map_err(|e| e.to_string())?;
        let a_f = spinor_series(&triples, SPINOR_N).map_err(|e| e.to_string())?;
        let lambda = normalized_eigenvalues(&a_f).map_err(|e| e.to_string())?;
        for n in 1..=SPINOR_N {
            let (a, l) = (a_f.complex(n).norm(), lambda.complex(n).norm());
            ensure(a <= d4[n] as f64 * (1.0 + DIVISOR_TOL), || {
                format!("seed {seed}: |a_F({n})| = {a} > d4")
            })?;
            ensure(l <= d5[n] as f64 * (1.0 + DIVISOR_TOL), || {
                format!("seed {seed}: |λ({n})| = {l} > d5")
            })?;
        }
        let exact = a_f.to_rational().map_err(|e| e.to_string())?;
        let lambda_exact = mobius_scaled_convolve(&exact).map_err(|e| e.to_string())?;
        let back = dirichlet_convolve(&lambda_exact, &zeta).map_err(|e| e.to_string())?;
        match (back.values(), exact.values()) {
            (Values::Rational(x), Values::Rational(y)) => ensure(x == y, || {
                format!("seed {seed}: rational round trip differs")
            })?,
            _ => return Err(format!("seed {seed}: round trip left rational mode")),
        }
    }
    Ok(format!(
        "{DATASETS} spinor datasets to {SPINOR_N}: d4/d5 bounds hold, rational round trip exact"
    ))
}

fn criterion_7(tau_small: &EigenformSeries) -> Outcome {
    let expected = [
        ("gl2-selfdual", Rational64::new(3, 5)),
        ("siegel-spinor", Rational64::new(41, 47)),
    ];
    for (name, t) in expected {
        let p = preset(name, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        ensure(p.threshold() == t, || {
            format!("{name} threshold {}", p.threshold())
        })?;
    }
    for m in 2..=8i64 {
        let p =
            preset(&format!("glm-ramanujan({m})"), DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        ensure(
            p.threshold() == Rational64::new(m * m - 1, m * m + 1),
            || format!("glm-ramanujan({m})"),
        )?;
        ensure(p.is_valid(), || format!("glm-ramanujan({m}) rejected"))?;
    }
    let presets = preset_profiles(DEFAULT_EPSILON);
    for (name, p) in &presets {
        ensure(p.is_valid(), || format!("{name} rejected"))?;
        let below = p.clone().with_r(p.threshold_f64() - 1e-6);
        ensure(!below.is_valid(), || {
            format!("{name} accepts r below threshold")
        })?;
    }
    let profile = &presets["gl2-selfdual"];
    let abs_tau =
        CoefficientSeries::from_real("|λ|", (1..=RANKIN_N).map(|n| tau_small.normalized(n).abs()));
    let neg = CoefficientSeries::from_integers("-d", (1..=RANKIN_N as i64).map(|n| -(n % 7)));
    for seq in [&abs_tau, &neg] {
        let report = scan_windows(seq, profile, 1, RANKIN_N / 2, DEFAULT_RATIO)
            .map_err(|e| e.to_string())?;
        ensure(report.windows.iter().all(|w| w.changes == 0), || {
            format!("{} reports a change", seq.label())
        })?;
        ensure(report.cumulative.iter().all(|c| c.1 == 0), || {
            format!("{} cumulative nonzero", seq.label())
        })?;
        ensure(
            sign_changes_window(seq, 100, 0.9).map_err(|e| e.to_string())? == 0,
            || "window count".into(),
        )?;
    }
    Ok(format!(
        "{} presets valid and rejected below threshold; one-signed sequences report 0 changes",
        presets.len()
    ))
}

/// Bit patterns of everything the pipeline computes in parallel.
fn pipeline_fingerprint() -> Vec<u64> {
    let n = 50_000;
    let f = delta_q_expansion(n).expect("τ");
    let mut bits: Vec<u64> = (1..=n).map(|k| f.normalized(k).to_bits()).collect();
    bits.extend((1..=n).map(|k| {
        f.coefficient(k)
            .iter_u64_digits()
            .fold(0u64, |a, d| a.rotate_left(7) ^ d)
    }));
    let data = synth_satake(3, n, SynthModel::RamanujanUniform, 42).expect("synthetic data");
    let series = assemble_series(&data, n).expect("assembly");
    bits.extend((1..=n).flat_map(|k| {
        [
            series.complex(k).re.to_bits(),
            series.complex(k).im.to_bits(),
        ]
    }));
    let profile = preset("gl2-selfdual", DEFAULT_EPSILON).expect("preset");
    let report =
        scan_windows(&f.normalized_series(), &profile, 1, n / 2, DEFAULT_RATIO).expect("scan");
    bits.extend(
        report
            .windows
            .iter()
            .flat_map(|w| [w.x as u64, w.changes, w.gap_fraction.to_bits()]),
    );
    bits
}

fn cli_run(config: &Path, outputs: &Path, threads: &str) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_automorph"))
        .arg("run")
        .arg(config)
        .arg("--set")
        .arg(format!("outputs={}", outputs.display()))
        .env("AUTOMORPH_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!(
            "run exited with {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        )
    })
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("output directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).expect("read"),
            )
        })
        .collect();
    files.sort();
    files
}

fn criterion_8() -> Outcome {
    let sequential = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .map_err(|e| e.to_string())?;
    let one = sequential.install(pipeline_fingerprint);
    let many = parallel.install(pipeline_fingerprint);
    ensure(one == many, || {
        "1-thread and 4-thread pipelines differ".into()
    })?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("experiment.cfg");
    std::fs::write(
        &config,
        "source=delta\nN=100000\npreset=gl2-selfdual\ntasks=windows,cumulative,moments,rankin-check,divisor-bound-check\n",
    )
    .map_err(|e| e.to_string())?;
    let runs = [("a", "4"), ("b", "4"), ("c", "1")];
    for (name, threads) in runs {
        cli_run(&config, &dir.path().join(name), threads)?;
    }
    let reference = csv_files(&dir.path().join("a"));
    ensure(reference.len() == 5, || {
        format!("expected 5 CSVs, found {}", reference.len())
    })?;
    for (name, _) in &runs[1..] {
        ensure(csv_files(&dir.path().join(name)) == reference, || {
            format!("run {name} differs from run a")
        })?;
    }
    Ok("1- and 4-thread pipelines bit-identical; repeated and single-threaded CLI runs give identical CSVs".into())
}

fn main() {
    let timer = Instant::now();
    let tau = delta_q_expansion(BIG_N).expect("τ to 10^6");
    let tau_time = timer.elapsed();
    let tau_small = delta_q_expansion(RANKIN_N).expect("τ to 10^4");

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("exact τ goldens and Hecke relations", Box::new(criterion_1)),
        (
            "Deligne bound and Euler reassembly",
            Box::new(|| criterion_2(&tau_small)),
        ),
        (
            "Rankin–Selberg inequality",
            Box::new(|| criterion_3(&tau_small)),
        ),
        (
            "moment asymptotics",
            Box::new(|| criterion_4(&tau, tau_time)),
        ),
        (
            "sign changes in short windows",
            Box::new(|| criterion_5(&tau)),
        ),
        ("genus-2 spinor pipeline", Box::new(criterion_6)),
        (
            "criterion engine soundness",
            Box::new(|| criterion_7(&tau_small)),
        ),
        ("determinism", Box::new(criterion_8)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            Err(panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
