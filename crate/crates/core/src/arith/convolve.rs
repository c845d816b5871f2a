use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{build_sieve, CoefficientSeries, Values};
use crate::error::{Error, Result};

fn convolve_slices<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Zero + AddAssign,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let limit = a.len() - 1;
    let mut out = vec![T::zero(); limit + 1];
    for d in 1..=limit {
        if a[d].is_zero() {
            continue;
        }
        for e in 1..=limit / d {
            if !b[e].is_zero() {
                out[d * e] += &a[d] * &b[e];
            }
        }
    }
    out
}

fn convolve_integers(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    let limit = a.len() - 1;
    let mut out = vec![0i64; limit + 1];
    for d in 1..=limit {
        if a[d] == 0 {
            continue;
        }
        for e in 1..=limit / d {
            let term = a[d].checked_mul(b[e])?;
            out[d * e] = out[d * e].checked_add(term)?;
        }
    }
    Some(out)
}

fn as_rationals(s: &CoefficientSeries) -> Vec<BigRational> {
    match s.values() {
        Values::Rational(v) => v.clone(),
        Values::Integer(v) => v
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect(),
        _ => unreachable!("only exact series convert losslessly"),
    }
}

/// (a * b)(n) = Σ_{d|n} a(d)·b(n/d) for every n ≤ N.
///
/// Exact inputs give an exact result (integers stay integers unless they
/// overflow `i64`, in which case the result is rational). Otherwise the
/// result is real, or complex if either side is complex.
pub fn dirichlet_convolve(
    a: &CoefficientSeries,
    b: &CoefficientSeries,
) -> Result<CoefficientSeries> {
    if a.limit() != b.limit() {
        return Err(Error::LimitMismatch {
            left: a.limit(),
            right: b.limit(),
        });
    }
    let label = format!("({})*({})", a.label(), b.label());
    let multiplicative = a.is_multiplicative() && b.is_multiplicative();
    let values = match (a.values(), b.values()) {
        (Values::Complex(_), _) | (_, Values::Complex(_)) => {
            Values::Complex(convolve_slices(&a.complex_values(), &b.complex_values()))
        }
        (Values::Real(_), _) | (_, Values::Real(_)) => {
            Values::Real(convolve_slices(&a.real_values()?, &b.real_values()?))
        }
        (Values::Integer(x), Values::Integer(y)) => match convolve_integers(x, y) {
            Some(v) => Values::Integer(v),
            None => Values::Rational(convolve_slices(&as_rationals(a), &as_rationals(b))),
        },
        _ => Values::Rational(convolve_slices(&as_rationals(a), &as_rationals(b))),
    };
    Ok(CoefficientSeries::new(label, values, multiplicative))
}

/// λ(n) = Σ_{d²m = n} (μ(d)/d)·a(m): the coefficients of the Dirichlet
/// series of `a` divided by ζ(2s+1).
///
/// Exact input yields rational output; float input stays float.
pub fn mobius_scaled_convolve(a: &CoefficientSeries) -> Result<CoefficientSeries> {
    let limit = a.limit();
    let root = (1..)
        .take_while(|d: &usize| d * d <= limit)
        .last()
        .unwrap_or(1);
    let sieve = build_sieve(root)?;
    let weights = || {
        (1..=root).filter_map(|d| {
            let mu = sieve.mobius(d);
            (mu != 0).then_some((d, mu))
        })
    };
    let label = format!("mobius-scaled({})", a.label());
    let values = match a.values() {
        Values::Integer(_) | Values::Rational(_) => {
            let src = as_rationals(a);
            let mut out = vec![BigRational::zero(); limit + 1];
            for (d, mu) in weights() {
                let w = BigRational::new(BigInt::from(mu), BigInt::from(d));
                for m in 1..=limit / (d * d) {
                    if !src[m].is_zero() {
                        out[d * d * m] += &w * &src[m];
                    }
                }
            }
            Values::Rational(out)
        }
        Values::Real(src) => {
            let mut out = vec![0.0; limit + 1];
            for (d, mu) in weights() {
                let w = mu as f64 / d as f64;
                for m in 1..=limit / (d * d) {
                    out[d * d * m] += w * src[m];
                }
            }
            Values::Real(out)
        }
        Values::Complex(src) => {
            let mut out = vec![Complex64::zero(); limit + 1];
            for (d, mu) in weights() {
                let w = mu as f64 / d as f64;
                for m in 1..=limit / (d * d) {
                    out[d * d * m] += src[m] * w;
                }
            }
            Values::Complex(out)
        }
    };
    Ok(CoefficientSeries::new(label, values, a.is_multiplicative()))
}

/// Coefficients of ζ(2s+1): e(n) = 1/d when n = d², else 0.
pub fn zeta_shift_series(limit: usize, exact: bool) -> Result<CoefficientSeries> {
    if limit == 0 {
        return Err(Error::InvalidArgument(
            "series limit must be at least 1".into(),
        ));
    }
    let squares = (1..).take_while(|d: &usize| d * d <= limit);
    let values = if exact {
        let mut v = vec![BigRational::zero(); limit + 1];
        for d in squares {
            v[d * d] = BigRational::new(1.into(), BigInt::from(d));
        }
        Values::Rational(v)
    } else {
        let mut v = vec![0.0; limit + 1];
        for d in squares {
            v[d * d] = 1.0 / d as f64;
        }
        Values::Real(v)
    };
    Ok(CoefficientSeries::new("zeta(2s+1)", values, true))
}
