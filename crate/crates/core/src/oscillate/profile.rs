use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Slack added to a threshold to obtain the default window exponent r.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Exponents (α, β, γ) of the sign-change criterion with a window exponent r.
///
/// α, β, γ are exact rationals; the "+ε" of each bound is carried once, as
/// the gap between the threshold max{α+β, γ} and the default r.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentProfile {
    pub name: String,
    pub alpha: Rational64,
    pub beta: Rational64,
    pub gamma: Rational64,
    pub r: f64,
    pub epsilon: f64,
    /// Where each exponent comes from, in words.
    pub provenance: String,
}

impl ExponentProfile {
    /// A profile with r set to threshold + ε.
    pub fn new(
        name: impl Into<String>,
        alpha: Rational64,
        beta: Rational64,
        gamma: Rational64,
        epsilon: f64,
        provenance: impl Into<String>,
    ) -> Self {
        let mut p = ExponentProfile {
            name: name.into(),
            alpha,
            beta,
            gamma,
            r: 0.0,
            epsilon,
            provenance: provenance.into(),
        };
        p.r = p.threshold_f64() + epsilon;
        p
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    /// max{α + β, γ}.
    pub fn threshold(&self) -> Rational64 {
        (self.alpha + self.beta).max(self.gamma)
    }

    pub fn threshold_f64(&self) -> f64 {
        self.threshold().to_f64().unwrap_or(f64::NAN)
    }

    /// α + β < 1 and max{α+β, γ} < r < 1.
    pub fn is_valid(&self) -> bool {
        self.alpha + self.beta < Rational64::from_integer(1)
            && self.threshold_f64() < self.r
            && self.r < 1.0
    }

    /// Explains why the profile fails the criterion, or `None` when it holds.
    pub fn validity_error(&self) -> Option<String> {
        if self.alpha + self.beta >= Rational64::from_integer(1) {
            return Some(format!(
                "alpha + beta = {} is not below 1",
                self.alpha + self.beta
            ));
        }
        if !(self.threshold_f64() < self.r && self.r < 1.0) {
            return Some(format!(
                "r = {} must lie strictly between max{{alpha+beta, gamma}} = {} ({:.6}) and 1",
                self.r,
                self.threshold(),
                self.threshold_f64()
            ));
        }
        None
    }
}

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn check_degree(m: u32) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree must be at least 2, got {m}"
        )));
    }
    Ok(m as i64)
}

/// Exponent α in a(n) ≪ n^{α+ε} for GL_m coefficients: 7/64 (m = 2),
/// 5/14 (m = 3), 1/2 − 1/(m²+1) otherwise.
pub fn coefficient_bound_exponent(m: u32) -> Result<Rational64> {
    let m = check_degree(m)?;
    Ok(match m {
        2 => ratio(7, 64),
        3 => ratio(5, 14),
        _ => ratio(1, 2) - ratio(1, m * m + 1),
    })
}

/// Auxiliary η balancing the two error terms in the first-moment bound:
/// 23/96 for m = 2, (m²−1)/(m(m²+1)) for m ≥ 3.
pub fn partial_sum_eta(m: u32) -> Result<Rational64> {
    let m = check_degree(m)?;
    Ok(if m == 2 {
        ratio(23, 96)
    } else {
        ratio(m * m - 1, m * (m * m + 1))
    })
}

/// Exponent β in Σ_{n≤x} a(n) ≪ x^{β+ε}: 71/192 for m = 2,
/// (m²−m)/(m²+1) for m ≥ 3.
pub fn partial_sum_exponent(m: u32) -> Result<Rational64> {
    let m = check_degree(m)?;
    Ok(if m == 2 {
        ratio(71, 192)
    } else {
        ratio(m * m - m, m * m + 1)
    })
}

/// γ in Σ_{n≤x} a(n)² = cx + O(x^{γ+ε}) from the Rankin–Selberg moment.
fn rankin_selberg_exponent(m: i64) -> Rational64 {
    ratio(m * m - 1, m * m + 1)
}

fn gl2_selfdual(epsilon: f64) -> ExponentProfile {
    ExponentProfile::new(
        "gl2-selfdual",
        ratio(7, 64),
        ratio(71, 192),
        ratio(3, 5),
        epsilon,
        "alpha: GL2 coefficient bound n^(7/64+e); beta: first-moment bound x^(71/192+e); \
         gamma: Rankin-Selberg second moment x^(3/5+e)",
    )
}

fn glm(m: u32, epsilon: f64) -> Result<ExponentProfile> {
    if m == 2 {
        return Ok(gl2_selfdual(epsilon).with_name("glm(2)"));
    }
    let mi = check_degree(m)?;
    Ok(ExponentProfile::new(
        format!("glm({m})"),
        coefficient_bound_exponent(m)?,
        partial_sum_exponent(m)?,
        rankin_selberg_exponent(mi),
        epsilon,
        format!(
            "alpha: GL{m} coefficient bound ({}); beta: first-moment bound (m^2-m)/(m^2+1); \
             gamma: Rankin-Selberg second moment (m^2-1)/(m^2+1)",
            if m == 3 { "5/14" } else { "1/2 - 1/(m^2+1)" }
        ),
    ))
}

fn glm_ramanujan(m: u32, epsilon: f64) -> Result<ExponentProfile> {
    let mi = check_degree(m)?;
    Ok(ExponentProfile::new(
        format!("glm-ramanujan({m})"),
        Rational64::zero(),
        partial_sum_exponent(m)?,
        rankin_selberg_exponent(mi),
        epsilon,
        "alpha: 0 under the Ramanujan conjecture; beta: first-moment bound; \
         gamma: Rankin-Selberg second moment (m^2-1)/(m^2+1)",
    ))
}

fn siegel_spinor(epsilon: f64) -> ExponentProfile {
    ExponentProfile::new(
        "siegel-spinor",
        Rational64::zero(),
        ratio(3, 5),
        ratio(41, 47),
        epsilon,
        "alpha: 0 since |lambda(n)| <= d_5(n); beta: spinor first moment x^(3/5+e); \
         gamma: second moment of normalized eigenvalues x^(41/47+e)",
    )
}

impl ExponentProfile {
    fn with_name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }
}

/// Looks up a preset by name: `gl2-selfdual`, `siegel-spinor`, `glm(m)` or
/// `glm-ramanujan(m)`.
pub fn preset(name: &str, epsilon: f64) -> Result<ExponentProfile> {
    let parse_m = |inner: &str| {
        inner
            .parse::<u32>()
            .map_err(|_| Error::InvalidArgument(format!("bad degree in preset `{name}`")))
    };
    match name {
        "gl2-selfdual" => Ok(gl2_selfdual(epsilon)),
        "siegel-spinor" => Ok(siegel_spinor(epsilon)),
        _ => {
            if let Some(inner) = name
                .strip_prefix("glm-ramanujan(")
                .and_then(|s| s.strip_suffix(')'))
            {
                glm_ramanujan(parse_m(inner)?, epsilon)
            } else if let Some(inner) = name.strip_prefix("glm(").and_then(|s| s.strip_suffix(')'))
            {
                glm(parse_m(inner)?, epsilon)
            } else {
                Err(Error::InvalidArgument(format!("unknown preset `{name}`")))
            }
        }
    }
}

/// The named presets that satisfy the criterion at slack ε.
///
/// `glm(m)` for m ≥ 4 is available through [`preset`] but omitted here: its
/// α + β exceeds 1.
pub fn preset_profiles(epsilon: f64) -> BTreeMap<String, ExponentProfile> {
    let mut out = BTreeMap::new();
    let mut add = |p: ExponentProfile| {
        out.insert(p.name.clone(), p);
    };
    add(gl2_selfdual(epsilon));
    add(siegel_spinor(epsilon));
    add(glm(3, epsilon).expect("m = 3"));
    for m in 2..=6 {
        add(glm_ramanujan(m, epsilon).expect("m >= 2"));
    }
    out
}
