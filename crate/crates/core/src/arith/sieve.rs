use std::ops::Mul;

use crate::arith::{CoefficientSeries, Values};
use crate::error::{Error, Result};

/// Möbius and smallest-prime-factor tables for `1..=limit`.
///
/// Both tables are indexed directly by `n`; slot 0 is a placeholder.
#[derive(Clone, Debug)]
pub struct SieveTables {
    limit: usize,
    mobius: Vec<i8>,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SieveTables {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn mobius(&self, n: usize) -> i8 {
        self.mobius[n]
    }

    /// μ(1..=limit) in order.
    pub fn mobius_values(&self) -> &[i8] {
        &self.mobius[1..]
    }

    /// Smallest prime factor of `n`; by convention 1 for `n = 1`.
    pub fn smallest_prime_factor(&self, n: usize) -> u32 {
        self.spf[n]
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// μ as an exact integer series.
    pub fn mobius_series(&self) -> CoefficientSeries {
        let mut values = Vec::with_capacity(self.limit + 1);
        values.extend(self.mobius.iter().map(|&m| m as i64));
        CoefficientSeries::new("mobius", Values::Integer(values), true)
    }
}

/// Linear sieve up to `limit`.
pub fn build_sieve(limit: usize) -> Result<SieveTables> {
    if limit == 0 {
        return Err(Error::InvalidArgument(
            "sieve limit must be at least 1".into(),
        ));
    }
    if limit > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!(
            "sieve limit {limit} exceeds u32 range"
        )));
    }
    let mut spf = vec![0u32; limit + 1];
    let mut mobius = vec![0i8; limit + 1];
    let mut primes = Vec::new();
    spf[1] = 1;
    mobius[1] = 1;
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            mobius[n] = -1;
            primes.push(n as u32);
        }
        let sn = spf[n];
        for &p in &primes {
            let m = n * p as usize;
            if p > sn || m > limit {
                break;
            }
            spf[m] = p;
            mobius[m] = if p == sn { 0 } else { -mobius[n] };
        }
    }
    Ok(SieveTables {
        limit,
        mobius,
        spf,
        primes,
    })
}

/// Builds a multiplicative function on `1..=limit` from its values at prime
/// powers. `local(p, k)` is called exactly once per prime power `p^k ≤ limit`.
///
/// The returned vector is indexed by `n` with slot 0 set to `T::default()`.
pub fn assemble_multiplicative<T, F>(sieve: &SieveTables, one: T, mut local: F) -> Vec<T>
where
    T: Clone + Default,
    for<'a> &'a T: Mul<&'a T, Output = T>,
    F: FnMut(u64, u32) -> T,
{
    let limit = sieve.limit;
    let mut out = vec![T::default(); limit + 1];
    // prime-power part of n and its exponent
    let mut pp = vec![1u32; limit + 1];
    let mut exp = vec![0u8; limit + 1];
    out[1] = one;
    for n in 2..=limit {
        let p = sieve.spf[n] as usize;
        let m = n / p;
        if m > 1 && sieve.spf[m] as usize == p {
            pp[n] = pp[m] * p as u32;
            exp[n] = exp[m] + 1;
        } else {
            pp[n] = p as u32;
            exp[n] = 1;
        }
        let q = pp[n] as usize;
        out[n] = if q == n {
            local(p as u64, exp[n] as u32)
        } else {
            &out[q] * &out[n / q]
        };
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (1..=k).fold(1u64, |acc, i| acc * (n - k + i) / i)
}

/// d_l(1..=limit): the number of ordered l-tuples with product n.
pub fn divisor_function(l: u32, limit: usize) -> Result<CoefficientSeries> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "divisor function order must be at least 1".into(),
        ));
    }
    let sieve = build_sieve(limit)?;
    let values = assemble_multiplicative(&sieve, 1i64, |_, k| {
        binomial(k as u64 + l as u64 - 1, l as u64 - 1) as i64
    });
    Ok(CoefficientSeries::new(
        format!("d_{l}"),
        Values::Integer(values),
        true,
    ))
}

/// Indices n ≤ N with |a(n)| > d_l(n)·(1 + tol), skipping absent entries.
pub fn divisor_bound_violations(
    series: &CoefficientSeries,
    l: u32,
    tol: f64,
) -> Result<Vec<usize>> {
    let bound = divisor_function(l, series.limit())?;
    Ok((1..=series.limit())
        .filter(|&n| series.is_present(n))
        .filter(|&n| {
            let d = bound.integer(n).expect("integer table") as f64;
            series.complex(n).norm() > d * (1.0 + tol)
        })
        .collect())
}
