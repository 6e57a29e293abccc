//! L²-normalized eigenfunctions of the one-dimensional oscillator `-∂² + x²`.
//!
//! Levels are `2n + 1`; this convention is shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HermiteIndex(pub usize);

impl HermiteIndex {
    pub fn energy(self) -> u64 {
        2 * self.0 as u64 + 1
    }
}

/// Level `n` of `-∂² + x²`.
pub fn oscillator_energy(n: HermiteIndex) -> f64 {
    n.energy() as f64
}

/// Fill `out[k] = h_k(x)` for `k < out.len()`.
///
/// Uses `h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}`. Beyond the
/// radius where `exp(-x²/2)` underflows every entry is exactly zero.
pub fn hermite_all<T: Scalar>(x: T, out: &mut [T]) {
    if out.is_empty() {
        return;
    }
    let gauss = (-x * x * T::lit(0.5)).exp();
    if gauss == T::zero() || !x.is_finite() {
        out.iter_mut().for_each(|v| *v = T::zero());
        return;
    }
    out[0] = T::PI().powf(T::lit(-0.25)) * gauss;
    if out.len() > 1 {
        out[1] = T::SQRT_2() * x * out[0];
    }
    for k in 1..out.len().saturating_sub(1) {
        let kf = T::from_usize_lossy(k);
        let kp = kf + T::one();
        out[k + 1] = x * (T::lit(2.0) / kp).sqrt() * out[k] - (kf / kp).sqrt() * out[k - 1];
    }
}

pub fn hermite_eval<T: Scalar>(n: HermiteIndex, x: T) -> T {
    let mut buf = vec![T::zero(); n.0 + 1];
    hermite_all(x, &mut buf);
    buf[n.0]
}

/// `h_n'(x) = sqrt(n/2) h_{n-1}(x) - sqrt((n+1)/2) h_{n+1}(x)`.
pub fn hermite_derivative<T: Scalar>(n: HermiteIndex, x: T) -> T {
    let mut buf = vec![T::zero(); n.0 + 2];
    hermite_all(x, &mut buf);
    hermite_derivative_from(&buf, n.0)
}

/// Derivative of `h_n` from a table holding `h_0 ..= h_{n+1}`.
pub fn hermite_derivative_from<T: Scalar>(table: &[T], n: usize) -> T {
    let half = T::lit(0.5);
    let up = (T::from_usize_lossy(n + 1) * half).sqrt() * table[n + 1];
    if n == 0 {
        -up
    } else {
        (T::from_usize_lossy(n) * half).sqrt() * table[n - 1] - up
    }
}

/// Ground state of `-∂_y² + y²/ε²`: `(sqrt(π ε))^{-1/2} exp(-y²/(2ε))`, energy `1/ε`.
pub fn uepsilon_eval<T: Scalar>(eps: T, y: T) -> Result<T> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return invalid(format!("epsilon must be positive, got {eps}"));
    }
    Ok((T::PI() * eps).sqrt().powf(T::lit(-0.5)) * (-y * y / (T::lit(2.0) * eps)).exp())
}

/// `d u_ε / dy`.
pub fn uepsilon_derivative<T: Scalar>(eps: T, y: T) -> Result<T> {
    Ok(-y / eps * uepsilon_eval(eps, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator_basis::quadrature::{make_quadrature, QuadratureKind};
    use proptest::prelude::*;

    #[test]
    fn ground_state_value() {
        let want = std::f64::consts::PI.powf(-0.25);
        assert!((hermite_eval(HermiteIndex(0), 0.0f64) - want).abs() < 1e-15);
        assert!((want - 0.7511255).abs() < 1e-7);
        assert_eq!(hermite_eval(HermiteIndex(1), 0.0f64), 0.0);
        assert!((hermite_eval(HermiteIndex(0), 0.0f32) - want as f32).abs() < 1e-6);
    }

    #[test]
    fn energies() {
        assert_eq!(oscillator_energy(HermiteIndex(0)), 1.0);
        assert_eq!(oscillator_energy(HermiteIndex(2)), 5.0);
        assert_eq!(oscillator_energy(HermiteIndex(10)), 21.0);
    }

    #[test]
    fn third_level_normalized() {
        let rule = make_quadrature(QuadratureKind::GaussHermite, 64).unwrap();
        let norm = rule.integrate_plain(|x| hermite_eval(HermiteIndex(3), x).powi(2));
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn underflow_returns_exact_zero() {
        let mut buf = [1.0f64; 8];
        hermite_all(60.0, &mut buf);
        assert!(buf.iter().all(|&v| v == 0.0));
    }

    /// 8th-order central stencil for the second derivative.
    fn second_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let c = [
            -205.0 / 72.0,
            8.0 / 5.0,
            -1.0 / 5.0,
            8.0 / 315.0,
            -1.0 / 560.0,
        ];
        let mut acc = c[0] * f(x);
        for (k, ck) in c.iter().enumerate().skip(1) {
            let d = k as f64 * h;
            acc += ck * (f(x + d) + f(x - d));
        }
        acc / (h * h)
    }

    #[test]
    fn eigen_relation_on_grid() {
        for n in 0..=10 {
            let idx = HermiteIndex(n);
            let mut worst: f64 = 0.0;
            let mut x = -6.0;
            while x <= 6.0 {
                let lhs = -second_derivative(|t| hermite_eval(idx, t), x, 0.02)
                    + x * x * hermite_eval(idx, x);
                worst = worst.max((lhs - idx.energy() as f64 * hermite_eval(idx, x)).abs());
                x += 0.05;
            }
            assert!(worst < 1e-8, "n = {n}: residual {worst}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for n in 0..6 {
            let x = 0.37f64;
            let h = 1e-5;
            let fd = (hermite_eval(HermiteIndex(n), x + h) - hermite_eval(HermiteIndex(n), x - h))
                / (2.0 * h);
            assert!((fd - hermite_derivative(HermiteIndex(n), x)).abs() < 1e-8);
        }
    }

    #[test]
    fn uepsilon_values() {
        let want = std::f64::consts::PI.powf(-0.25);
        assert!((uepsilon_eval(1.0, 0.0).unwrap() - want).abs() < 1e-15);
        let direct = (0.25f64 * std::f64::consts::PI).sqrt().powf(-0.5) * (-0.5f64).exp();
        assert!((uepsilon_eval(0.25, 0.5).unwrap() - direct).abs() < 1e-15);
        assert!(uepsilon_eval(0.0, 1.0).is_err());
        assert!(uepsilon_eval(-1.0, 1.0).is_err());
        let rule = make_quadrature(QuadratureKind::GaussHermite, 40).unwrap();
        for eps in [1.0f64, 0.1, 0.01] {
            // y = sqrt(eps) t maps u_ε² onto the Hermite weight.
            let s = eps.sqrt();
            let norm = s * rule.integrate_plain(|t| uepsilon_eval(eps, s * t).unwrap().powi(2));
            assert!((norm - 1.0).abs() < 1e-12, "eps = {eps}: {norm}");
        }
    }

    proptest! {
        #[test]
        fn orthonormal_pairs(n in 0usize..=30, k in 0usize..=30) {
            let rule = make_quadrature(QuadratureKind::GaussHermite, 128).unwrap();
            let mut tab = vec![0.0; 31];
            let mut acc = 0.0;
            for (&x, &w) in rule.nodes.iter().zip(&rule.plain_weights) {
                hermite_all(x, &mut tab);
                acc += w * tab[n] * tab[k];
            }
            let delta = if n == k { 1.0 } else { 0.0 };
            prop_assert!((acc - delta).abs() < 1e-10);
        }
    }
}
