use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::euler::PARAM_TOL;

/// Per-prime Satake parameters of a degree-m Euler product.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeData {
    degree: usize,
    conductor: u64,
    per_prime: BTreeMap<u64, Vec<Complex64>>,
    ramanujan_exponent: f64,
    lrs_compliant: bool,
    model: String,
    seed: u64,
}

/// θ in the Luo–Rudnick–Sarnak bound |α| ≤ p^θ for GL_m.
pub fn lrs_exponent(degree: usize) -> f64 {
    0.5 - 1.0 / ((degree * degree) as f64 + 1.0)
}

impl SatakeData {
    /// Empty data with declared bound |α_i(p)| ≤ p^θ.
    pub fn new(degree: usize, ramanujan_exponent: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if !(ramanujan_exponent >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Ramanujan exponent must be nonnegative, got {ramanujan_exponent}"
            )));
        }
        Ok(SatakeData {
            degree,
            conductor: 1,
            per_prime: BTreeMap::new(),
            ramanujan_exponent,
            lrs_compliant: false,
            model: "custom".into(),
            seed: 0,
        })
    }

    pub fn with_provenance(mut self, model: impl Into<String>, seed: u64) -> Self {
        self.model = model.into();
        self.seed = seed;
        self
    }

    /// Declares the data LRS-compliant; fails if θ exceeds 1/2 − 1/(m²+1).
    pub fn mark_lrs_compliant(mut self) -> Result<Self> {
        let bound = lrs_exponent(self.degree);
        if self.ramanujan_exponent > bound + PARAM_TOL {
            return Err(Error::InvalidArgument(format!(
                "exponent {} exceeds the LRS bound {bound} for degree {}",
                self.ramanujan_exponent, self.degree
            )));
        }
        self.lrs_compliant = true;
        Ok(self)
    }

    /// Adds the parameters at `p`, checking their count and the declared bound.
    pub fn insert(&mut self, p: u64, alphas: Vec<Complex64>) -> Result<()> {
        if alphas.len() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "prime {p}: expected {} parameters, got {}",
                self.degree,
                alphas.len()
            )));
        }
        let bound = (p as f64).powf(self.ramanujan_exponent);
        if let Some(a) = alphas.iter().find(|a| a.norm() > bound + PARAM_TOL) {
            return Err(Error::InvalidArgument(format!(
                "prime {p}: |{a}| exceeds p^{} = {bound}",
                self.ramanujan_exponent
            )));
        }
        self.per_prime.insert(p, alphas);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn ramanujan_exponent(&self) -> f64 {
        self.ramanujan_exponent
    }

    pub fn is_lrs_compliant(&self) -> bool {
        self.lrs_compliant
    }

    pub fn model(&self) -> &str {
        &self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, p: u64) -> Option<&[Complex64]> {
        self.per_prime.get(&p).map(Vec::as_slice)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.per_prime.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[Complex64])> {
        self.per_prime.iter().map(|(&p, v)| (p, v.as_slice()))
    }

    /// True when every stored parameter has modulus 1.
    pub fn is_unitary(&self) -> bool {
        self.per_prime
            .values()
            .flatten()
            .all(|a| (a.norm() - 1.0).abs() <= PARAM_TOL)
    }

    /// Parameters of the contragredient of unitary data: the conjugates.
    pub fn unitary_contragredient(&self) -> Result<Self> {
        if !self.is_unitary() {
            return Err(Error::InvalidArgument(
                "the contragredient is only derivable for unitary parameters".into(),
            ));
        }
        let mut out = self.clone();
        for alphas in out.per_prime.values_mut() {
            for a in alphas.iter_mut() {
                *a = a.conj();
            }
        }
        out.model = format!("{}-dual", self.model);
        Ok(out)
    }

    /// Line-oriented text form: a header `degree=m conductor=Q model=<name> seed=<s>`
    /// followed by `p re_1 im_1 … re_m im_m` per prime.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "degree={} conductor={} model={} seed={}",
            self.degree, self.conductor, self.model, self.seed
        )?;
        let mut line = String::new();
        for (p, alphas) in &self.per_prime {
            line.clear();
            write!(line, "{p}").unwrap();
            for a in alphas {
                write!(line, " {:?} {:?}", a.re, a.im).unwrap();
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Parses [`write_text`](Self::write_text) output. The declared exponent
    /// is 0 for unitary data and otherwise the smallest θ covering every
    /// stored parameter.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header = header?;
        let mut degree = None;
        let mut conductor = 1;
        let mut model = String::from("custom");
        let mut seed = 0;
        for field in header.split_whitespace() {
            let bad = |what: &str| Error::Parse {
                line: 1,
                message: format!("bad {what} in `{field}`"),
            };
            match field.split_once('=') {
                Some(("degree", v)) => {
                    degree = Some(v.parse::<usize>().map_err(|_| bad("degree"))?)
                }
                Some(("conductor", v)) => conductor = v.parse().map_err(|_| bad("conductor"))?,
                Some(("model", v)) => model = v.to_string(),
                Some(("seed", v)) => seed = v.parse().map_err(|_| bad("seed"))?,
                _ => return Err(bad("header field")),
            }
        }
        let degree = degree.ok_or(Error::Parse {
            line: 1,
            message: "header lacks degree=".into(),
        })?;
        if conductor != 1 {
            return Err(Error::Parse {
                line: 1,
                message: format!("conductor {conductor}: only unramified data is supported"),
            });
        }
        let mut per_prime = BTreeMap::new();
        let mut theta: f64 = 0.0;
        for (idx, line) in lines {
            let line = line?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            let mut tokens = line.split_whitespace();
            let p: u64 = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .filter(|&p| p >= 2)
                .ok_or_else(|| err("expected a prime".into()))?;
            let nums: Vec<f64> = tokens
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| err(format!("bad number `{t}`")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 * degree {
                return Err(err(format!(
                    "expected {} numbers, got {}",
                    2 * degree,
                    nums.len()
                )));
            }
            let alphas: Vec<Complex64> =
                nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            for a in &alphas {
                if (a.norm() - 1.0).abs() > PARAM_TOL && a.norm() > 1.0 {
                    theta = theta.max(a.norm().ln() / (p as f64).ln());
                }
            }
            if per_prime.insert(p, alphas).is_some() {
                return Err(err(format!("prime {p} listed twice")));
            }
        }
        Ok(SatakeData {
            degree,
            conductor,
            per_prime,
            ramanujan_exponent: theta,
            lrs_compliant: false,
            model,
            seed,
        })
    }
}
