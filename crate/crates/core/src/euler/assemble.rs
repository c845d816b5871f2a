use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::{assemble_multiplicative, build_sieve, CoefficientSeries, Values};
use crate::error::{Error, Result};
use crate::euler::{expand_local_factor, max_exponent, rankin_selberg_local, SatakeData};

/// Dirichlet coefficients a(1..=N) of the Euler product described by `data`.
///
/// Each prime's local factor is expanded only up to p^k ≤ N. Expansion runs in
/// parallel per prime; assembly is sequential, so the output does not depend
/// on the thread count.
pub fn assemble_series(data: &SatakeData, limit: usize) -> Result<CoefficientSeries> {
    let sieve = build_sieve(limit)?;
    let primes = sieve.primes();
    if let Some(&p) = primes.iter().find(|&&p| data.get(p as u64).is_none()) {
        return Err(Error::MissingPrime(p as u64));
    }
    let local: Vec<Vec<Complex64>> = primes
        .par_iter()
        .map(|&p| {
            let alphas = data.get(p as u64).expect("checked above");
            expand_local_factor(alphas, max_exponent(p as u64, limit as u64) as usize)
        })
        .collect();
    let values = assemble_multiplicative(&sieve, Complex64::one(), |p, k| {
        let idx = primes.binary_search(&(p as u32)).expect("sieve prime");
        local[idx][k as usize]
    });
    let label = format!("euler[{}; m={}]", data.model(), data.degree());
    Ok(CoefficientSeries::new(label, Values::Complex(values), true))
}

/// Satake data of the Rankin–Selberg product of `a` and `b` on the primes
/// both cover. For π × π̃ pass the contragredient's data as `b`.
pub fn rankin_selberg_data(a: &SatakeData, b: &SatakeData) -> Result<SatakeData> {
    let theta = a.ramanujan_exponent() + b.ramanujan_exponent();
    let mut out = SatakeData::new(a.degree() * b.degree(), theta)?
        .with_provenance(format!("rs({},{})", a.model(), b.model()), a.seed());
    for (p, alphas) in a.iter() {
        if let Some(betas) = b.get(p) {
            out.insert(p, rankin_selberg_local(alphas, betas))?;
        }
    }
    Ok(out)
}
