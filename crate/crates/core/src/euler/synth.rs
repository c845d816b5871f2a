use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::build_sieve;
use crate::error::{Error, Result};
use crate::euler::satake::lrs_exponent;
use crate::euler::SatakeData;

/// Distribution used to draw synthetic Satake parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthModel {
    /// Unit-circle parameters in conjugate pairs (plus ±1 for odd degree).
    RamanujanUniform,
    /// GL₂ only: angle θ_p with density (2/π)·sin²θ on [0, π].
    SatoTate,
    /// Conjugate pairs of modulus p^{1/2 − 1/(m²+1)}.
    LrsExtremal,
}

impl SynthModel {
    pub fn name(self) -> &'static str {
        match self {
            SynthModel::RamanujanUniform => "ramanujan-uniform",
            SynthModel::SatoTate => "sato-tate",
            SynthModel::LrsExtremal => "lrs-extremal",
        }
    }
}

impl std::str::FromStr for SynthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ramanujan-uniform" => Ok(SynthModel::RamanujanUniform),
            "sato-tate" => Ok(SynthModel::SatoTate),
            "lrs-extremal" => Ok(SynthModel::LrsExtremal),
            other => Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
        }
    }
}

fn sato_tate_angle(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let theta = rng.gen_range(0.0..PI);
        if rng.gen::<f64>() <= theta.sin().powi(2) {
            return theta;
        }
    }
}

/// Deterministic synthetic parameters of degree `m` for every prime ≤ `limit`.
///
/// All models produce parameter multisets closed under conjugation, so the
/// assembled coefficients are real.
pub fn synth_satake(m: usize, limit: usize, model: SynthModel, seed: u64) -> Result<SatakeData> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree must be at least 2, got {m}"
        )));
    }
    if model == SynthModel::SatoTate && m != 2 {
        return Err(Error::InvalidArgument(format!(
            "sato-tate requires degree 2, got {m}"
        )));
    }
    let theta = match model {
        SynthModel::LrsExtremal => lrs_exponent(m),
        _ => 0.0,
    };
    let mut data = SatakeData::new(m, theta)?.with_provenance(model.name(), seed);
    if model == SynthModel::LrsExtremal {
        data = data.mark_lrs_compliant()?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sieve = build_sieve(limit)?;
    for &p in sieve.primes() {
        let radius = (p as f64).powf(theta);
        let mut alphas = Vec::with_capacity(m);
        for _ in 0..m / 2 {
            let angle = match model {
                SynthModel::SatoTate => sato_tate_angle(&mut rng),
                _ => rng.gen_range(0.0..PI),
            };
            let z = Complex64::from_polar(radius, angle);
            alphas.push(z);
            alphas.push(z.conj());
        }
        if m % 2 == 1 {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            alphas.push(Complex64::new(sign * radius, 0.0));
        }
        data.insert(p as u64, alphas)?;
    }
    Ok(data)
}
