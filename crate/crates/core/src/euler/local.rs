use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::euler::PARAM_TOL;

/// Coefficients of ∏(1 − X·α)^{-1} up to X^k, together with the
/// coefficients of ∏(1 − X·α) that drive the recurrence.
fn local_polynomial(alphas: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::one()];
    for &a in alphas {
        let mut next = poly.clone();
        next.push(Complex64::zero());
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] -= c * a;
        }
        poly = next;
    }
    poly
}

/// Power-series coefficients c_0..=c_k of ∏_i (1 − α_i X)^{-1}; the prime
/// power coefficient a(p^k) of the Euler product is c_k.
///
/// With P(X) = ∏(1 − α_i X) = Σ p_i X^i, the recurrence is
/// c_k = −Σ_{i=1}^{min(k,m)} p_i c_{k−i}.
pub fn expand_local_factor(alphas: &[Complex64], k: usize) -> Vec<Complex64> {
    let poly = local_polynomial(alphas);
    let mut c = Vec::with_capacity(k + 1);
    c.push(Complex64::one());
    for n in 1..=k {
        let mut acc = Complex64::zero();
        for i in 1..poly.len().min(n + 1) {
            acc -= poly[i] * c[n - i];
        }
        c.push(acc);
    }
    c
}

/// Satake list of the Rankin–Selberg convolution: all products a_i·b_j,
/// `a`-major. For π × π̃ pass the contragredient's parameters as `b`.
pub fn rankin_selberg_local(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Parameters {α^j, α^{j−2}, …, α^{−j}} of Sym^j of a GL₂ pair {α, β} with αβ = 1.
pub fn symmetric_power_local(alphas: &[Complex64], j: u32) -> Result<Vec<Complex64>> {
    let [a, b] = alphas else {
        return Err(Error::InvalidArgument(format!(
            "symmetric power needs 2 parameters, got {}",
            alphas.len()
        )));
    };
    if j == 0 {
        return Err(Error::InvalidArgument(
            "symmetric power order must be at least 1".into(),
        ));
    }
    if (a * b - Complex64::one()).norm() > PARAM_TOL {
        return Err(Error::InvalidArgument(format!(
            "parameters {a} and {b} do not multiply to 1"
        )));
    }
    // α^{j−i} β^i = α^{j−2i} once αβ = 1
    Ok((0..=j as i32)
        .map(|i| a.powi(j as i32 - i) * b.powi(i))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    /// Multiplies out the geometric series of each parameter directly.
    fn brute_expand(alphas: &[Complex64], k: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); k + 1];
        acc[0] = Complex64::one();
        for &a in alphas {
            let geo: Vec<Complex64> = (0..=k).map(|i| a.powi(i as i32)).collect();
            let mut next = vec![Complex64::zero(); k + 1];
            for i in 0..=k {
                for j in 0..=k - i {
                    next[i + j] += acc[i] * geo[j];
                }
            }
            acc = next;
        }
        acc
    }

    /// Power series of 1/P(X) by long division.
    fn long_division(poly: &[Complex64], k: usize) -> Vec<Complex64> {
        let mut rem = vec![Complex64::zero(); k + 1];
        rem[0] = Complex64::one();
        let mut q = Vec::with_capacity(k + 1);
        for n in 0..=k {
            let c = rem[n] / poly[0];
            q.push(c);
            for (i, &p) in poly.iter().enumerate() {
                if n + i <= k {
                    rem[n + i] -= c * p;
                }
            }
        }
        q
    }

    #[test]
    fn geometric_series() {
        let c = expand_local_factor(&[Complex64::one()], 3);
        assert_eq!(c, vec![Complex64::one(); 4]);
    }

    #[test]
    fn chebyshev_for_unit_pair() {
        let theta: f64 = 1.1;
        let c = expand_local_factor(&[unit(theta), unit(-theta)], 8);
        let brute = brute_expand(&[unit(theta), unit(-theta)], 8);
        for k in 0..=8 {
            let expected = ((k as f64 + 1.0) * theta).sin() / theta.sin();
            assert_abs_diff_eq!(c[k].re, expected, epsilon = 1e-12);
            assert_abs_diff_eq!(c[k].im, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((c[k] - brute[k]).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fourfold_one() {
        let c = expand_local_factor(&[Complex64::one(); 4], 1);
        assert_eq!(c[1], Complex64::new(4.0, 0.0));
    }

    #[test]
    fn rankin_selberg_products() {
        let a = Complex64::new(0.3, 0.2);
        let b = Complex64::new(-1.0, 0.5);
        assert_eq!(rankin_selberg_local(&[a], &[b]), vec![a * b]);

        let t = 0.7;
        let pi = [unit(t), unit(-t)];
        let dual = [unit(t).conj(), unit(-t).conj()];
        let rs = rankin_selberg_local(&pi, &dual);
        let expected = [
            Complex64::one(),
            unit(2.0 * t),
            unit(-2.0 * t),
            Complex64::one(),
        ];
        for (x, y) in rs.iter().zip(expected.iter()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-15);
        }
        // a_{π×π̃}(p) = |a_π(p)|²
        let sum: Complex64 = rs.iter().sum();
        let ap: Complex64 = pi.iter().sum();
        assert_abs_diff_eq!(sum.re, ap.norm_sqr(), epsilon = 1e-12);
    }

    #[test]
    fn symmetric_powers() {
        let t = 0.4;
        let pair = [unit(t), unit(-t)];
        let s1 = symmetric_power_local(&pair, 1).unwrap();
        assert_abs_diff_eq!((s1[0] - pair[0]).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s1[1] - pair[1]).norm(), 0.0, epsilon = 1e-15);

        let s2 = symmetric_power_local(&pair, 2).unwrap();
        let sum: Complex64 = s2.iter().sum();
        assert_abs_diff_eq!(sum.re, 1.0 + 2.0 * (2.0 * t).cos(), epsilon = 1e-12);

        let half_pi = [
            unit(std::f64::consts::FRAC_PI_2),
            unit(-std::f64::consts::FRAC_PI_2),
        ];
        let sum: Complex64 = symmetric_power_local(&half_pi, 2).unwrap().iter().sum();
        assert_abs_diff_eq!(sum.re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_power_rejects_non_unit_product() {
        let pair = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            symmetric_power_local(&pair, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(symmetric_power_local(&[Complex64::one()], 2).is_err());
    }

    fn params() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec(
            (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(r, i)| Complex64::new(r, i)),
            1..=4,
        )
    }

    proptest! {
        #[test]
        fn recurrence_matches_long_division(alphas in params(), k in 0usize..=10) {
            let c = expand_local_factor(&alphas, k);
            let q = long_division(&local_polynomial(&alphas), k);
            let b = brute_expand(&alphas, k);
            for n in 0..=k {
                let scale = q[n].norm().max(1.0);
                prop_assert!((c[n] - q[n]).norm() <= 1e-10 * scale);
                prop_assert!((c[n] - b[n]).norm() <= 1e-10 * scale);
            }
        }
    }
}
