use num_complex::Complex64;

use crate::arith::{build_sieve, CoefficientSeries};
use crate::error::{Error, Result};
use crate::euler::{assemble_series, symmetric_power_local, SatakeData, PARAM_TOL};
use crate::gl2::EigenformSeries;

/// Degree-2 Satake data {e^{iθ_p}, e^{−iθ_p}} with 2cos θ_p = λ(p), θ_p ∈ [0, π],
/// for every prime p ≤ `prime_bound`.
pub fn satake_angles(f: &EigenformSeries, prime_bound: usize) -> Result<SatakeData> {
    if prime_bound > f.limit() {
        return Err(Error::InvalidArgument(format!(
            "prime bound {prime_bound} exceeds series limit {}",
            f.limit()
        )));
    }
    let mut data = SatakeData::new(2, 0.0)?.with_provenance(f.label(), 0);
    if prime_bound < 2 {
        return Ok(data);
    }
    for &p in build_sieve(prime_bound)?.primes() {
        let pair = unit_pair(f.normalized(p as usize)).ok_or_else(|| {
            Error::DataCorruption(format!(
                "|λ({p})| = {} exceeds the Deligne bound 2",
                f.normalized(p as usize).abs()
            ))
        })?;
        data.insert(p as u64, pair.to_vec())?;
    }
    Ok(data)
}

/// {e^{iθ}, e^{−iθ}} with 2cos θ = λ; `None` when |λ| > 2 beyond tolerance.
fn unit_pair(lambda: f64) -> Option<[Complex64; 2]> {
    if !(lambda.abs() <= 2.0 + PARAM_TOL) {
        return None;
    }
    let theta = (lambda / 2.0).clamp(-1.0, 1.0).acos();
    let alpha = Complex64::from_polar(1.0, theta);
    Some([alpha, alpha.conj()])
}

/// Satake data of Sym^j of `f` at every prime ≤ `prime_bound`.
pub fn symmetric_power_data(f: &EigenformSeries, j: u32, prime_bound: usize) -> Result<SatakeData> {
    let angles = satake_angles(f, prime_bound)?;
    let mut sym =
        SatakeData::new(j as usize + 1, 0.0)?.with_provenance(format!("sym{j}({})", f.label()), 0);
    for (p, alphas) in angles.iter() {
        sym.insert(p, symmetric_power_local(alphas, j)?)?;
    }
    Ok(sym)
}

/// Coefficients of Sym^j of `f` up to N, assembled from symmetric powers of
/// its Satake angles.
pub fn symmetric_power_series(
    f: &EigenformSeries,
    j: u32,
    limit: usize,
) -> Result<CoefficientSeries> {
    let label = format!("sym{j}({})", f.label());
    Ok(assemble_series(&symmetric_power_data(f, j, limit)?, limit)?
        .into_real(PARAM_TOL)?
        .with_label(label))
}
