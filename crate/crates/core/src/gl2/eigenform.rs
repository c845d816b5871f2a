use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{build_sieve, CoefficientSeries, Values};
use crate::error::{Error, Result};
use crate::gl2::ntt::{crt_symmetric, moduli_for_bits, Modulus};

/// Exact coefficients a(1..=N) of a normalized eigenform of weight k together
/// with the unitary normalization λ(n) = a(n)/n^{(k−1)/2}.
#[derive(Clone, Debug)]
pub struct EigenformSeries {
    weight: u32,
    exact: Vec<BigInt>,
    normalized: Vec<f64>,
    label: String,
}

impl EigenformSeries {
    /// Wraps exact coefficients for n = 1, 2, … in order.
    pub fn from_exact(weight: u32, coeffs: Vec<BigInt>, label: impl Into<String>) -> Result<Self> {
        if weight < 12 || weight % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "weight must be even and at least 12, got {weight}"
            )));
        }
        if coeffs.first().is_none_or(|a| !a.is_one()) {
            return Err(Error::InvalidArgument("a(1) must equal 1".into()));
        }
        let mut exact = Vec::with_capacity(coeffs.len() + 1);
        exact.push(BigInt::zero());
        exact.extend(coeffs);
        let half = (weight as f64 - 1.0) / 2.0;
        let normalized = exact
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n == 0 {
                    0.0
                } else {
                    a.to_f64().unwrap_or(f64::NAN) / (n as f64).powf(half)
                }
            })
            .collect();
        Ok(EigenformSeries {
            weight,
            exact,
            normalized,
            label: label.into(),
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn limit(&self) -> usize {
        self.exact.len() - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coefficient(&self, n: usize) -> &BigInt {
        &self.exact[n]
    }

    pub fn normalized(&self, n: usize) -> f64 {
        self.normalized[n]
    }

    /// The unitary normalization as a real multiplicative series.
    pub fn normalized_series(&self) -> CoefficientSeries {
        CoefficientSeries::new(
            format!("{}-normalized", self.label),
            Values::Real(self.normalized.clone()),
            true,
        )
    }

    /// First index breaking a(mn) = a(m)a(n) for coprime m, n or the prime
    /// power recurrence a(p^{r+1}) = a(p)a(p^r) − p^{k−1}a(p^{r−1}).
    pub fn hecke_violation(&self) -> Option<usize> {
        let limit = self.limit();
        let sieve = build_sieve(limit).ok()?;
        if !self.exact[1].is_one() {
            return Some(1);
        }
        for &p in sieve.primes() {
            let p = p as usize;
            let pk1 = BigInt::from(p).pow(self.weight - 1);
            let (mut prev, mut cur) = (1usize, p);
            while let Some(next) = cur.checked_mul(p).filter(|&q| q <= limit) {
                let expected = &self.exact[p] * &self.exact[cur] - &pk1 * &self.exact[prev];
                if self.exact[next] != expected {
                    return Some(next);
                }
                prev = cur;
                cur = next;
            }
        }
        for m in 2..=limit / 2 {
            for n in m + 1..=limit / m {
                if m.gcd(&n) == 1 && self.exact[m * n] != &self.exact[m] * &self.exact[n] {
                    return Some(m * n);
                }
            }
        }
        None
    }

    /// First prime p with |a(p)| ≥ 2p^{(k−1)/2}, checked exactly as a(p)² ≥ 4p^{k−1}.
    pub fn deligne_violation(&self) -> Option<u64> {
        let sieve = build_sieve(self.limit()).ok()?;
        sieve.primes().iter().map(|&p| p as u64).find(|&p| {
            let a = &self.exact[p as usize];
            a * a >= BigInt::from(4) * BigInt::from(p).pow(self.weight - 1)
        })
    }

    /// CSV with header `n,exact,normalized`; normalized values carry 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "exact", "normalized"])?;
        for n in 1..=self.limit() {
            out.write_record([
                n.to_string(),
                self.exact[n].to_string(),
                format!("{:.16e}", self.normalized[n]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Bits of CRT modulus needed to pin every a(n), n ≤ N, in the
    /// symmetric residue range.
    fn bits_needed(weight: u32, limit: usize) -> f64 {
        // |a(n)| ≤ d(n) n^{(k−1)/2} ≤ 2 n^{k/2}; the symmetric range needs 2× that
        let n = (limit.max(2)) as f64;
        2.0 + weight as f64 / 2.0 * n.log2() + 8.0
    }
}

/// ∏_{n≥1}(1 − qⁿ) to `len` terms by Euler's pentagonal-number theorem.
fn euler_product_mod(m: Modulus, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    out[0] = 1;
    for k in 1i64.. {
        let first = (k * (3 * k - 1) / 2) as usize;
        if first >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { m.p - 1 };
        out[first] = sign;
        let second = (k * (3 * k + 1) / 2) as usize;
        if second < len {
            out[second] = sign;
        }
    }
    out
}

/// 1 + c·Σ σ_r(n) qⁿ modulo p.
fn eisenstein_mod(m: Modulus, scale: i64, r: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for d in 1..len {
        let dr = m.pow(d as u64, r);
        for n in (d..len).step_by(d) {
            out[n] = m.add(out[n], dr);
        }
    }
    let c = m.reduce(scale);
    for x in out.iter_mut() {
        *x = m.mul(*x, c);
    }
    out[0] = 1;
    out
}

/// (a, b) with weight = 12 + 4a + 6b for the one-dimensional cusp spaces.
fn eisenstein_exponents(weight: u32) -> Option<(u32, u32)> {
    match weight {
        12 => Some((0, 0)),
        16 => Some((1, 0)),
        18 => Some((0, 1)),
        20 => Some((2, 0)),
        22 => Some((1, 1)),
        26 => Some((2, 1)),
        _ => None,
    }
}

/// Δ·E₄^a·E₆^b / q modulo p, to `len` terms.
fn eigenform_mod(m: Modulus, weight: u32, len: usize) -> Vec<u64> {
    let (a, b) = eisenstein_exponents(weight).expect("validated weight");
    let mut g = m.pow_trunc(&euler_product_mod(m, len), 24, len);
    if a > 0 {
        let e4 = m.pow_trunc(&eisenstein_mod(m, 240, 3, len), a, len);
        g = m.mul_trunc(&g, &e4, len);
    }
    if b > 0 {
        let e6 = eisenstein_mod(m, -504, 5, len);
        g = m.mul_trunc(&g, &e6, len);
    }
    g
}

/// The unique normalized cusp eigenform of level 1 and the given weight
/// (12, 16, 18, 20, 22 or 26), exactly, to N coefficients.
///
/// The q-expansion is computed modulo enough word-sized primes to cover the
/// Deligne bound on |a(n)| and recombined by CRT.
pub fn level_one_eigenform(weight: u32, limit: usize) -> Result<EigenformSeries> {
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be at least 1".into()));
    }
    if eisenstein_exponents(weight).is_none() {
        return Err(Error::InvalidArgument(format!(
            "no one-dimensional level-1 cusp space in weight {weight}"
        )));
    }
    let moduli = moduli_for_bits(EigenformSeries::bits_needed(weight, limit));
    let residues: Vec<Vec<u64>> = moduli
        .par_iter()
        .map(|&m| eigenform_mod(m, weight, limit))
        .collect();
    let coeffs = crt_symmetric(&moduli, &residues);
    let label = if weight == 12 {
        "delta".to_string()
    } else {
        format!("level1-weight{weight}")
    };
    EigenformSeries::from_exact(weight, coeffs, label)
}

/// Ramanujan τ(1..=N) from q·∏(1 − qⁿ)²⁴.
pub fn delta_q_expansion(limit: usize) -> Result<EigenformSeries> {
    level_one_eigenform(12, limit)
}
