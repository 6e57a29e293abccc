//! Projection of a two-anyon eigenfunction onto the transverse ground state.
//!
//! `φ^ε(x₁, x₂) = ∫ Ψ(x, y) e^{iαS} u_ε(y₁) u_ε(y₂) dy₁ dy₂`, tabulated on a
//! symmetric uniform grid. On the diagonal the phase is taken as the limit
//! `x₁ - x₂ → 0⁺`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::state::TwoAnyonState;
use crate::error::{invalid, Result};
use crate::oscillator_basis::{make_quadrature, uepsilon_eval, QuadratureKind};
use crate::tonks_girardeau::{tg_eigenfunction_eval, TGEigenstate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGrid {
    pub half_width: f64,
    /// Odd, so that the origin and the diagonal are grid points.
    pub points: usize,
}

impl Default for XGrid {
    fn default() -> Self {
        Self {
            half_width: 5.0,
            points: 41,
        }
    }
}

impl XGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return invalid(format!(
                "grid half width must be positive, got {}",
                self.half_width
            ));
        }
        if self.points < 5 || self.points.is_multiple_of(2) {
            return invalid(format!(
                "grid needs an odd number of points >= 5, got {}",
                self.points
            ));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|i| -self.half_width + h * i as f64)
            .collect()
    }
}

/// `atan(Δy/Δx)` with the one-sided limit `Δx → 0⁺` on the x-diagonal.
pub fn phase_one_sided(dx: f64, dy: f64) -> f64 {
    if dx == 0.0 {
        if dy == 0.0 {
            0.0
        } else {
            FRAC_PI_2.copysign(dy)
        }
    } else {
        (dy / dx).atan()
    }
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub grid: XGrid,
    pub epsilon: f64,
    pub alpha: f64,
    /// Row-major, `values[i * n + j] = φ(x_i, x_j)`.
    pub values: Vec<Complex64>,
}

pub fn project_phi_eps(state: &TwoAnyonState, grid: XGrid, y_order: usize) -> Result<Projection> {
    grid.validate()?;
    let alpha = state.problem.alpha;
    let eps = state.problem.epsilon;
    let rule = make_quadrature(QuadratureKind::GaussHermite, y_order)?;
    let se = eps.sqrt();
    let ys: Vec<f64> = rule.nodes.iter().map(|t| se * t).collect();
    let mut uw = Vec::with_capacity(ys.len());
    for (&y, &w) in ys.iter().zip(&rule.plain_weights) {
        uw.push(se * w * uepsilon_eval(eps, y)?);
    }
    let xs = grid.nodes();
    let n = grid.points;
    let values = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (x1, x2) = (xs[idx / n], xs[idx % n]);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, &y1) in ys.iter().enumerate() {
                for (b, &y2) in ys.iter().enumerate() {
                    let s = phase_one_sided(x1 - x2, y1 - y2);
                    acc += state.eval(x1, y1, x2, y2)
                        * Complex64::from_polar(uw[a] * uw[b], alpha * s);
                }
            }
            acc
        })
        .collect();
    Ok(Projection {
        grid,
        epsilon: eps,
        alpha,
        values,
    })
}

impl Projection {
    fn n(&self) -> usize {
        self.grid.points
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n() + j]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n()).map(|i| self.at(i, i)).collect()
    }

    pub fn diagonal_max(&self) -> f64 {
        self.diagonal().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |φ(x₁, x₂) - φ(x₂, x₁)|`.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.at(i, j) - self.at(j, i)).norm());
            }
        }
        worst
    }

    /// Residual `φ - Pφ` after projecting on the span of `states` with the
    /// trapezoid inner product.
    pub fn residual_from(&self, states: &[TGEigenstate]) -> Result<Vec<Complex64>> {
        if states.is_empty() {
            return invalid("need at least one reference state");
        }
        let xs = self.grid.nodes();
        let n = self.n();
        let tw = self.trapezoid_weights();
        let mut basis = Vec::with_capacity(states.len());
        for st in states {
            let mut f = Vec::with_capacity(n * n);
            for &x1 in &xs {
                for &x2 in &xs {
                    f.push(tg_eigenfunction_eval(st, &[x1, x2])?);
                }
            }
            basis.push(f);
        }
        let d = basis.len();
        let gram = DMatrix::from_fn(d, d, |a, b| {
            (0..n * n)
                .map(|i| tw[i] * basis[a][i] * basis[b][i])
                .sum::<f64>()
        });
        let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| {
            crate::error::Error::Quadrature(
                "reference states are linearly dependent on the grid".into(),
            )
        })?;
        let mut proj = vec![Complex64::new(0.0, 0.0); n * n];
        for part in 0..2 {
            let pick = |v: Complex64| if part == 0 { v.re } else { v.im };
            let rhs = DVector::from_fn(d, |a, _| {
                (0..n * n)
                    .map(|i| tw[i] * basis[a][i] * pick(self.values[i]))
                    .sum::<f64>()
            });
            let c = chol.solve(&rhs);
            for i in 0..n * n {
                let v: f64 = (0..d).map(|a| c[a] * basis[a][i]).sum();
                if part == 0 {
                    proj[i].re = v;
                } else {
                    proj[i].im = v;
                }
            }
        }
        Ok(self.values.iter().zip(&proj).map(|(v, p)| v - p).collect())
    }

    fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.n();
        let h = self.grid.spacing();
        let w1 = |i: usize| if i == 0 || i == n - 1 { 0.5 * h } else { h };
        (0..n * n).map(|i| w1(i / n) * w1(i % n)).collect()
    }

    /// L² distance from φ to the span of `states`.
    pub fn l2_distance(&self, states: &[TGEigenstate]) -> Result<f64> {
        let e = self.residual_from(states)?;
        let tw = self.trapezoid_weights();
        Ok(e.iter()
            .zip(&tw)
            .map(|(v, w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Finite-difference H¹ norm of the residual, a coarse diagnostic only.
    pub fn h1_distance(&self, states: &[TGEigenstate]) -> Result<f64> {
        let e = self.residual_from(states)?;
        let n = self.n();
        let h = self.grid.spacing();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += h * h * e[i * n + j].norm_sqr();
                if i + 1 < n {
                    acc += (e[(i + 1) * n + j] - e[i * n + j]).norm_sqr();
                }
                if j + 1 < n {
                    acc += (e[i * n + j + 1] - e[i * n + j]).norm_sqr();
                }
            }
        }
        Ok(acc.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rules() {
        assert!(XGrid {
            half_width: 4.0,
            points: 40
        }
        .validate()
        .is_err());
        assert!(XGrid {
            half_width: -1.0,
            points: 41
        }
        .validate()
        .is_err());
        let g = XGrid {
            half_width: 2.0,
            points: 5,
        };
        assert_eq!(g.nodes(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn one_sided_phase() {
        assert_eq!(phase_one_sided(0.0, 0.3), FRAC_PI_2);
        assert_eq!(phase_one_sided(0.0, -0.3), -FRAC_PI_2);
        assert_eq!(phase_one_sided(0.0, 0.0), 0.0);
        assert!((phase_one_sided(1e-300, 0.3) - FRAC_PI_2).abs() < 1e-15);
        assert!((phase_one_sided(-2.0, 2.0) + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }
}
