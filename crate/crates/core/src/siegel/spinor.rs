use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{build_sieve, mobius_scaled_convolve, CoefficientSeries};
use crate::error::{Error, Result};
use crate::euler::{assemble_series, SatakeData, PARAM_TOL};

/// Satake parameters (α₀, α₁, α₂) of a genus-2 eigenform at one prime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiegelLocalTriple {
    pub p: u64,
    pub alpha0: Complex64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

impl SiegelLocalTriple {
    /// |α₀| = |α₁| = |α₂| = 1 within tolerance.
    pub fn is_ramanujan(&self) -> bool {
        [self.alpha0, self.alpha1, self.alpha2]
            .iter()
            .all(|a| (a.norm() - 1.0).abs() <= PARAM_TOL)
    }

    /// α₀²α₁α₂, equal to 1 for the standard Sp₄ normalization.
    pub fn similitude(&self) -> Complex64 {
        self.alpha0 * self.alpha0 * self.alpha1 * self.alpha2
    }
}

/// {α₀, α₀α₁, α₀α₂, α₀α₁α₂}, in that order.
pub fn beta_parameters(t: &SiegelLocalTriple) -> [Complex64; 4] {
    let (a0, a1, a2) = (t.alpha0, t.alpha1, t.alpha2);
    [a0, a0 * a1, a0 * a2, a0 * a1 * a2]
}

/// Degree-4 Satake data of the spinor zeta function.
pub fn spinor_satake(triples: &[SiegelLocalTriple]) -> Result<SatakeData> {
    let unitary = triples.iter().all(SiegelLocalTriple::is_ramanujan);
    let theta = if unitary {
        0.0
    } else {
        triples
            .iter()
            .flat_map(|t| beta_parameters(t).map(|b| b.norm().ln().max(0.0) / (t.p as f64).ln()))
            .fold(0.0, f64::max)
    };
    let mut data = SatakeData::new(4, theta)?.with_provenance("spinor", 0);
    for t in triples {
        data.insert(t.p, beta_parameters(t).to_vec())?;
    }
    Ok(data)
}

/// a_F(1..=N) from the Euler product ∏_p ∏_i (1 − β_{i,p} p^{−s})^{−1}.
///
/// The series is real whenever every β multiset is closed under conjugation;
/// otherwise it stays complex.
pub fn spinor_series(triples: &[SiegelLocalTriple], limit: usize) -> Result<CoefficientSeries> {
    let series = assemble_series(&spinor_satake(triples)?, limit)?.with_label("a_F");
    let real = series
        .complex_values()
        .iter()
        .all(|z| z.im.abs() <= PARAM_TOL * z.norm().max(1.0));
    if real {
        series.into_real(PARAM_TOL)
    } else {
        Ok(series)
    }
}

/// λ(n) = Σ_{d²m=n} (μ(d)/d)·a_F(m), i.e. the coefficients of Z(s,F)·ζ(2s+1)^{−1}.
pub fn normalized_eigenvalues(a_f: &CoefficientSeries) -> Result<CoefficientSeries> {
    Ok(mobius_scaled_convolve(a_f)?.with_label(format!("lambda[{}]", a_f.label())))
}

/// Seeded unitary triples for every prime ≤ N whose β multisets are closed
/// under conjugation, so a_F and λ are real.
///
/// With `symplectic` set every triple satisfies α₀²α₁α₂ = 1:
/// α₁ = e^{iφ₁}, α₂ = e^{iφ₂}, α₀ = e^{−i(φ₁+φ₂)/2}. Otherwise each prime
/// draws that family or, with equal probability, the family
/// α₀ = e^{iψ}, α₁ = e^{−2iψ}, α₂ = −1 where α₀²α₁α₂ = −1.
pub fn synth_spinor_triples(
    limit: usize,
    seed: u64,
    symplectic: bool,
) -> Result<Vec<SiegelLocalTriple>> {
    if limit < 2 {
        return Err(Error::InvalidArgument("limit must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |t: f64| Complex64::from_polar(1.0, t);
    Ok(build_sieve(limit)?
        .primes()
        .iter()
        .map(|&p| {
            let paired = symplectic || rng.gen::<bool>();
            if paired {
                let (f1, f2) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
                SiegelLocalTriple {
                    p: p as u64,
                    alpha0: unit(-(f1 + f2) / 2.0),
                    alpha1: unit(f1),
                    alpha2: unit(f2),
                }
            } else {
                let psi = rng.gen_range(0.0..2.0 * PI);
                SiegelLocalTriple {
                    p: p as u64,
                    alpha0: unit(psi),
                    alpha1: unit(-2.0 * psi),
                    alpha2: Complex64::new(-1.0, 0.0),
                }
            }
        })
        .collect())
}
