//! Two-anyon eigenfunctions rebuilt from center-of-mass quantum numbers and
//! relative Galerkin coefficients.

use num_complex::Complex64;

use crate::anyon2d::RelativeProblem;
use crate::error::{invalid, Result};
use crate::oscillator_basis::{hermite_eval, laguerre_functions, HermiteIndex};

#[derive(Debug, Clone)]
pub struct TwoAnyonState {
    pub problem: RelativeProblem,
    /// Normalized real coefficients in the relative basis.
    pub coeffs: Vec<f64>,
    pub cm: (usize, usize),
}

impl TwoAnyonState {
    pub fn new(problem: RelativeProblem, coeffs: Vec<f64>, cm: (usize, usize)) -> Result<Self> {
        if coeffs.len() != problem.dimension() {
            return invalid(format!(
                "{} coefficients for a basis of {}",
                coeffs.len(),
                problem.dimension()
            ));
        }
        Ok(Self {
            problem,
            coeffs,
            cm,
        })
    }

    /// `2^{1/4} h_p(sqrt 2 X) · (2/ε)^{1/4} h_q(sqrt(2/ε) Y)`
    pub fn cm_eval(&self, x: f64, y: f64) -> f64 {
        let e = self.problem.epsilon;
        let fx = 2f64.powf(0.25) * hermite_eval(HermiteIndex(self.cm.0), 2f64.sqrt() * x);
        let fy = (2.0 / e).powf(0.25) * hermite_eval(HermiteIndex(self.cm.1), (2.0 / e).sqrt() * y);
        fx * fy
    }

    /// Radial sums `g_m(r) = Σ_n c_{n,m} R_{n,|m+α|}(r)`, one per channel.
    pub fn channel_radial(&self, r: f64) -> Vec<f64> {
        let p = &self.problem;
        let nb = p.n_max + 1;
        let w = p.omega_b;
        let t = 0.5 * w * r * r;
        let mut buf = vec![0.0; nb];
        p.channels()
            .iter()
            .enumerate()
            .map(|(b, &m)| {
                let nu = (m as f64 + p.alpha).abs();
                laguerre_functions(nu, t, &mut buf);
                w.sqrt()
                    * buf
                        .iter()
                        .zip(&self.coeffs[b * nb..(b + 1) * nb])
                        .map(|(f, c)| f * c)
                        .sum::<f64>()
            })
            .collect()
    }

    /// Relative wave function at polar `(r, θ)` from precomputed channel sums.
    pub fn relative_from_channels(&self, g: &[f64], theta: f64) -> Complex64 {
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        self.problem
            .channels()
            .iter()
            .zip(g)
            .map(|(&m, &gm)| Complex64::from_polar(gm * norm, m as f64 * theta))
            .sum()
    }

    /// `Ψ(x₁, y₁, x₂, y₂)`.
    pub fn eval(&self, x1: f64, y1: f64, x2: f64, y2: f64) -> Complex64 {
        let (rx, ry) = (x1 - x2, y1 - y2);
        let r = (rx * rx + ry * ry).sqrt();
        let g = self.channel_radial(r);
        self.relative_from_channels(&g, ry.atan2(rx))
            * self.cm_eval(0.5 * (x1 + x2), 0.5 * (y1 + y2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator_basis::{make_quadrature, QuadratureKind};

    #[test]
    fn exchange_symmetric_and_normalized() {
        let p = RelativeProblem::new(0.7, 0.5, 4, 4).unwrap();
        let mut c: Vec<f64> = (0..p.dimension())
            .map(|i| ((i * 7 % 11) as f64 - 5.0) / 10.0)
            .collect();
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= n);
        let st = TwoAnyonState::new(p, c, (1, 0)).unwrap();
        let a = st.eval(0.3, -0.2, -0.5, 0.4);
        let b = st.eval(-0.5, 0.4, 0.3, -0.2);
        assert!((a - b).norm() < 1e-12);
        // relative norm by polar quadrature in r = s²
        let (ss, sw) = make_quadrature(QuadratureKind::GaussLegendre, 120)
            .unwrap()
            .mapped_to(0.0, 3.5);
        let nth = 64;
        let mut acc = 0.0;
        for (&s, &w) in ss.iter().zip(&sw) {
            let r = s * s;
            let g = st.channel_radial(r);
            for k in 0..nth {
                let th = 2.0 * std::f64::consts::PI * k as f64 / nth as f64;
                acc += w
                    * 2.0
                    * s
                    * r
                    * (2.0 * std::f64::consts::PI / nth as f64)
                    * st.relative_from_channels(&g, th).norm_sqr();
            }
        }
        assert!((acc - 1.0).abs() < 1e-8, "{acc}");
        assert!(TwoAnyonState::new(st.problem.clone(), vec![0.0; 3], (0, 0)).is_err());
    }
}
