use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Storage for the values of a series. Every vector is indexed by `n` and has
/// `limit + 1` slots; slot 0 is unused and holds zero.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Integer(Vec<i64>),
    Rational(Vec<BigRational>),
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Values {
    fn slots(&self) -> usize {
        match self {
            Values::Integer(v) => v.len(),
            Values::Rational(v) => v.len(),
            Values::Real(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Values::Integer(_) => "integer",
            Values::Rational(_) => "rational",
            Values::Real(_) => "real",
            Values::Complex(_) => "complex",
        }
    }
}

/// A coefficient sequence a(1..=N) of a Dirichlet series.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    label: String,
    values: Values,
    multiplicative: bool,
    /// Sorted indices with no value (ingested data only).
    missing: Vec<usize>,
}

impl CoefficientSeries {
    /// Wraps `values` (indexed by `n`, slot 0 ignored and zeroed).
    ///
    /// Panics if `values` has no slot for `n = 1`.
    pub fn new(label: impl Into<String>, mut values: Values, multiplicative: bool) -> Self {
        assert!(
            values.slots() >= 2,
            "a series needs at least one coefficient"
        );
        match &mut values {
            Values::Integer(v) => v[0] = 0,
            Values::Rational(v) => v[0] = BigRational::zero(),
            Values::Real(v) => v[0] = 0.0,
            Values::Complex(v) => v[0] = Complex64::zero(),
        }
        CoefficientSeries {
            label: label.into(),
            values,
            multiplicative,
            missing: Vec::new(),
        }
    }

    /// Builds a series from values for `n = 1, 2, ...` in order.
    pub fn from_real(label: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = std::iter::once(0.0).chain(values).collect();
        Self::new(label, Values::Real(v), false)
    }

    pub fn from_integers(label: impl Into<String>, values: impl IntoIterator<Item = i64>) -> Self {
        let v: Vec<i64> = std::iter::once(0).chain(values).collect();
        Self::new(label, Values::Integer(v), false)
    }

    /// Marks indices as absent. Absent entries read as zero.
    pub fn with_missing(mut self, mut missing: Vec<usize>) -> Self {
        missing.sort_unstable();
        missing.dedup();
        missing.retain(|&n| n >= 1 && n <= self.limit());
        for &n in &missing {
            match &mut self.values {
                Values::Integer(v) => v[n] = 0,
                Values::Rational(v) => v[n] = BigRational::zero(),
                Values::Real(v) => v[n] = 0.0,
                Values::Complex(v) => v[n] = Complex64::zero(),
            }
        }
        self.missing = missing;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn limit(&self) -> usize {
        self.values.slots() - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn into_values(self) -> Values {
        self.values
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, Values::Integer(_) | Values::Rational(_))
    }

    pub fn missing(&self) -> &[usize] {
        &self.missing
    }

    pub fn is_present(&self, n: usize) -> bool {
        self.missing.binary_search(&n).is_err()
    }

    /// Number of absent indices in `start..=end`.
    pub fn missing_in(&self, start: usize, end: usize) -> usize {
        let lo = self.missing.partition_point(|&n| n < start);
        let hi = self.missing.partition_point(|&n| n <= end);
        hi - lo
    }

    pub fn integer(&self, n: usize) -> Option<i64> {
        match &self.values {
            Values::Integer(v) => Some(v[n]),
            Values::Rational(v) if v[n].is_integer() => v[n].to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn rational(&self, n: usize) -> Option<BigRational> {
        match &self.values {
            Values::Integer(v) => Some(BigRational::from_integer(BigInt::from(v[n]))),
            Values::Rational(v) => Some(v[n].clone()),
            Values::Real(v) => BigRational::from_float(v[n]),
            Values::Complex(_) => None,
        }
    }

    pub fn complex(&self, n: usize) -> Complex64 {
        match &self.values {
            Values::Complex(v) => v[n],
            _ => Complex64::new(self.real(n).unwrap_or(f64::NAN), 0.0),
        }
    }

    /// Value at `n` as a float; `None` for complex series.
    pub fn real(&self, n: usize) -> Option<f64> {
        match &self.values {
            Values::Integer(v) => Some(v[n] as f64),
            Values::Rational(v) => v[n].to_f64(),
            Values::Real(v) => Some(v[n]),
            Values::Complex(_) => None,
        }
    }

    /// Float view indexed by `n` (slot 0 is zero).
    pub fn real_values(&self) -> Result<Vec<f64>> {
        match &self.values {
            Values::Integer(v) => Ok(v.iter().map(|&x| x as f64).collect()),
            Values::Rational(v) => Ok(v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()),
            Values::Real(v) => Ok(v.clone()),
            Values::Complex(_) => Err(Error::NotReal(self.label.clone())),
        }
    }

    /// Complex view indexed by `n`.
    pub fn complex_values(&self) -> Vec<Complex64> {
        match &self.values {
            Values::Complex(v) => v.clone(),
            _ => (0..=self.limit()).map(|n| self.complex(n)).collect(),
        }
    }

    /// Converts a complex series to a real one, provided every imaginary part
    /// is within `tol · max(1, |z|)`. Other representations pass through.
    pub fn into_real(self, tol: f64) -> Result<Self> {
        let Values::Complex(v) = &self.values else {
            return Ok(self);
        };
        if let Some(n) = (1..v.len()).find(|&n| v[n].im.abs() > tol * v[n].norm().max(1.0)) {
            return Err(Error::NotReal(format!(
                "{} (n = {n}, value {})",
                self.label, v[n]
            )));
        }
        let real = v.iter().map(|z| z.re).collect();
        Ok(CoefficientSeries {
            label: self.label,
            values: Values::Real(real),
            multiplicative: self.multiplicative,
            missing: self.missing,
        })
    }

    /// Exact rational copy. Floats convert exactly (dyadic rationals).
    pub fn to_rational(&self) -> Result<Self> {
        let values = match &self.values {
            Values::Complex(_) => return Err(Error::NotReal(self.label.clone())),
            Values::Rational(v) => v.clone(),
            _ => (0..=self.limit())
                .map(|n| {
                    self.rational(n).ok_or_else(|| {
                        Error::Data(format!("{}: non-finite value at n = {n}", self.label))
                    })
                })
                .collect::<Result<_>>()?,
        };
        Ok(CoefficientSeries {
            label: self.label.clone(),
            values: Values::Rational(values),
            multiplicative: self.multiplicative,
            missing: self.missing.clone(),
        })
    }

    /// Sign of each entry, indexed by `n`. Zero and absent entries give 0.
    pub fn signs(&self) -> Result<Vec<i8>> {
        let sign_f = |x: f64| {
            if x > 0.0 {
                1
            } else if x < 0.0 {
                -1
            } else {
                0
            }
        };
        let mut s: Vec<i8> = match &self.values {
            Values::Integer(v) => v.iter().map(|x| x.signum() as i8).collect(),
            Values::Rational(v) => v
                .iter()
                .map(|x| {
                    if x.is_positive() {
                        1
                    } else if x.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .collect(),
            Values::Real(v) => v.iter().map(|&x| sign_f(x)).collect(),
            Values::Complex(_) => return Err(Error::NotReal(self.label.clone())),
        };
        s[0] = 0;
        for &n in &self.missing {
            s[n] = 0;
        }
        Ok(s)
    }

    /// Scans every coprime pair `m·n ≤ N` with `m, n > 1` and returns the
    /// first pair violating `a(mn) = a(m)a(n)`, comparing floats with relative
    /// tolerance `tol`. Also checks `a(1) = 1`.
    pub fn multiplicativity_violation(&self, tol: f64) -> Option<(usize, usize)> {
        let limit = self.limit();
        let agrees = |m: usize, n: usize| -> bool {
            let mn = m * n;
            match &self.values {
                Values::Integer(v) => v[m].checked_mul(v[n]) == Some(v[mn]),
                Values::Rational(v) => &v[m] * &v[n] == v[mn],
                Values::Real(v) => {
                    let prod = v[m] * v[n];
                    (prod - v[mn]).abs() <= tol * prod.abs().max(v[mn].abs()).max(1.0)
                }
                Values::Complex(v) => {
                    let prod = v[m] * v[n];
                    (prod - v[mn]).norm() <= tol * prod.norm().max(v[mn].norm()).max(1.0)
                }
            }
        };
        let one_ok = match &self.values {
            Values::Integer(v) => v[1] == 1,
            Values::Rational(v) => v[1].is_one(),
            Values::Real(v) => (v[1] - 1.0).abs() <= tol,
            Values::Complex(v) => (v[1] - Complex64::one()).norm() <= tol,
        };
        if !one_ok {
            return Some((1, 1));
        }
        for m in 2..=limit / 2 {
            for n in m + 1..=limit / m {
                if m.gcd(&n) == 1 && !agrees(m, n) {
                    return Some((m, n));
                }
            }
        }
        None
    }
}
