//! Embedded golden checks.

use automorph::arith::{build_sieve, divisor_function};
use automorph::euler::assemble_series;
use automorph::gl2::{delta_q_expansion, satake_angles};
use automorph::oscillate::{preset, preset_profiles, DEFAULT_EPSILON};
use num_bigint::BigInt;
use num_rational::Rational64;

const TAU: [i64; 12] = [
    1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
];
const D2: [i64; 12] = [1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6];
const MOBIUS: [i8; 12] = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
const HECKE_LIMIT: usize = 2000;

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

/// Compares τ(1..=12) against the golden table.
pub fn check_tau(tau: &[BigInt]) -> Result<String, String> {
    let bad: Vec<String> = TAU
        .iter()
        .enumerate()
        .filter(|(i, &t)| tau.get(*i) != Some(&BigInt::from(t)))
        .map(|(i, t)| {
            let got = tau.get(i).map_or("missing".to_string(), |v| v.to_string());
            format!("τ({}) = {got}, expected {t}", i + 1)
        })
        .collect();
    if bad.is_empty() {
        Ok(format!("τ(1..={}) match, τ(4) = {}", TAU.len(), TAU[3]))
    } else {
        Err(bad.join("; "))
    }
}

fn check_hecke() -> Result<String, String> {
    let f = delta_q_expansion(HECKE_LIMIT).map_err(|e| e.to_string())?;
    if let Some(n) = f.hecke_violation() {
        return Err(format!("Hecke relations fail at n = {n}"));
    }
    if let Some(p) = f.deligne_violation() {
        return Err(format!("|τ({p})| exceeds 2p^(11/2)"));
    }
    Ok(format!(
        "Hecke relations and Deligne bound hold for n <= {HECKE_LIMIT}"
    ))
}

fn check_reassembly() -> Result<String, String> {
    let n = 1000;
    let f = delta_q_expansion(n).map_err(|e| e.to_string())?;
    let series = satake_angles(&f, n)
        .and_then(|s| assemble_series(&s, n))
        .map_err(|e| e.to_string())?;
    let worst = (1..=n)
        .map(|k| (series.complex(k).re - f.normalized(k)).abs() / f.normalized(k).abs().max(1e-300))
        .fold(0.0, f64::max);
    if worst < 1e-9 {
        Ok(format!("Euler product from Satake angles matches normalized τ, worst relative error {worst:.2e}"))
    } else {
        Err(format!("relative error {worst:.2e} exceeds 1e-9"))
    }
}

fn check_arithmetic() -> Result<String, String> {
    let d2 = divisor_function(2, 12).map_err(|e| e.to_string())?;
    let d4 = divisor_function(4, 12).map_err(|e| e.to_string())?;
    let d5 = divisor_function(5, 12).map_err(|e| e.to_string())?;
    let sieve = build_sieve(12).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for n in 1..=12 {
        if d2.integer(n) != Some(D2[n - 1]) {
            bad.push(format!("d_2({n})"));
        }
        if sieve.mobius(n) != MOBIUS[n - 1] {
            bad.push(format!("μ({n})"));
        }
    }
    if d4.integer(6) != Some(16) {
        bad.push("d_4(6)".into());
    }
    if d5.integer(7) != Some(5) {
        bad.push("d_5(7)".into());
    }
    if bad.is_empty() {
        Ok("d_2, μ tables to 12, d_4(6) = 16, d_5(7) = 5".into())
    } else {
        Err(format!("mismatch in {}", bad.join(", ")))
    }
}

fn check_presets() -> Result<String, String> {
    let expect = [
        ("gl2-selfdual", Rational64::new(3, 5)),
        ("siegel-spinor", Rational64::new(41, 47)),
        ("glm-ramanujan(2)", Rational64::new(3, 5)),
        ("glm-ramanujan(3)", Rational64::new(4, 5)),
    ];
    let mut lines = Vec::new();
    for (name, threshold) in expect {
        let p = preset(name, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        if p.threshold() != threshold {
            return Err(format!(
                "{name} threshold {} expected {threshold}",
                p.threshold()
            ));
        }
        lines.push(format!("{name} threshold {threshold}"));
    }
    if let Some((name, p)) = preset_profiles(DEFAULT_EPSILON)
        .iter()
        .find(|(_, p)| !p.is_valid())
    {
        return Err(format!(
            "{name} fails validity: {}",
            p.validity_error().unwrap_or_default()
        ));
    }
    Ok(lines.join(", "))
}

pub fn run_checks() -> Vec<Check> {
    let tau = delta_q_expansion(TAU.len())
        .map(|f| {
            (1..=TAU.len())
                .map(|n| f.coefficient(n).clone())
                .collect::<Vec<_>>()
        })
        .map_err(|e| e.to_string());
    vec![
        Check {
            name: "tau-goldens",
            outcome: tau.and_then(|t| check_tau(&t)),
        },
        Check {
            name: "tau-hecke-deligne",
            outcome: check_hecke(),
        },
        Check {
            name: "euler-reassembly",
            outcome: check_reassembly(),
        },
        Check {
            name: "arithmetic-tables",
            outcome: check_arithmetic(),
        },
        Check {
            name: "preset-thresholds",
            outcome: check_presets(),
        },
    ]
}
