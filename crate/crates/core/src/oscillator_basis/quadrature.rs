//! Gauss-type quadrature rules built by Golub-Welsch.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix of the three-term
//! recurrence, polished by Newton on the degree-`order` orthonormal polynomial.
//! Weights are computed from the Christoffel sum `1 / sum_k p_k(x)^2` in log
//! space rather than from eigenvector components, so weights far out in the
//! tail keep full relative accuracy.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadratureKind {
    /// Weight `exp(-x^2)` on the real line.
    GaussHermite,
    /// Weight `t^exponent exp(-t)` on the half line, `exponent > -1`.
    GaussLaguerre { exponent: f64 },
    /// Weight `1` on `[-1, 1]`.
    GaussLegendre,
    /// Equispaced periodic rule on `[0, 2 pi)`.
    TrapezoidAngular,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    /// Weights for integrals against the rule's weight function.
    pub weights: Vec<f64>,
    /// `weights[i] / w(nodes[i])`: weights for plain integrals `∫ f dx`.
    pub plain_weights: Vec<f64>,
    /// `ln weights[i]`, finite even where the weight itself over- or underflows
    /// (large Laguerre exponents).
    pub ln_weights: Vec<f64>,
}

struct Recurrence {
    diag: Vec<f64>,
    /// `off[k]` couples `p_k` and `p_{k+1}`.
    off: Vec<f64>,
    ln_mu0: f64,
}

impl QuadratureKind {
    fn recurrence(self, order: usize) -> Recurrence {
        match self {
            QuadratureKind::GaussHermite => Recurrence {
                diag: vec![0.0; order],
                off: (1..=order).map(|k| (k as f64 / 2.0).sqrt()).collect(),
                ln_mu0: 0.5 * std::f64::consts::PI.ln(),
            },
            QuadratureKind::GaussLaguerre { exponent: a } => Recurrence {
                diag: (0..order).map(|k| 2.0 * k as f64 + 1.0 + a).collect(),
                off: (1..=order)
                    .map(|k| (k as f64 * (k as f64 + a)).sqrt())
                    .collect(),
                ln_mu0: libm::lgamma(a + 1.0),
            },
            QuadratureKind::GaussLegendre => Recurrence {
                diag: vec![0.0; order],
                off: (1..=order)
                    .map(|k| {
                        let k = k as f64;
                        k / (4.0 * k * k - 1.0).sqrt()
                    })
                    .collect(),
                ln_mu0: 2f64.ln(),
            },
            QuadratureKind::TrapezoidAngular => unreachable!("trapezoid rule has no recurrence"),
        }
    }

    /// Natural log of the weight function; `None` where it vanishes.
    fn ln_weight(self, x: f64) -> Option<f64> {
        match self {
            QuadratureKind::GaussHermite => Some(-x * x),
            QuadratureKind::GaussLaguerre { exponent } => {
                if x <= 0.0 {
                    None
                } else {
                    Some(exponent * x.ln() - x)
                }
            }
            QuadratureKind::GaussLegendre | QuadratureKind::TrapezoidAngular => Some(0.0),
        }
    }

    /// Exact integral of the weight function.
    pub fn zeroth_moment(self) -> f64 {
        match self {
            QuadratureKind::GaussHermite => std::f64::consts::PI.sqrt(),
            QuadratureKind::GaussLaguerre { exponent } => libm::tgamma(exponent + 1.0),
            QuadratureKind::GaussLegendre => 2.0,
            QuadratureKind::TrapezoidAngular => 2.0 * std::f64::consts::PI,
        }
    }
}

/// Evaluate the orthonormal polynomial of degree `n = rec.diag.len()` and its
/// derivative at `x`, rescaling to stay finite. Returns `p_n / p_n'`.
fn newton_ratio(rec: &Recurrence, x: f64) -> f64 {
    let n = rec.diag.len();
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut d_prev = 0.0;
    let mut d = 0.0;
    for k in 0..n {
        let b_next = rec.off[k];
        let b_k = if k == 0 { 0.0 } else { rec.off[k - 1] };
        let p_next = ((x - rec.diag[k]) * p - b_k * p_prev) / b_next;
        let d_next = (p + (x - rec.diag[k]) * d - b_k * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let big = p.abs().max(d.abs());
        if big > 1e150 {
            p /= big;
            p_prev /= big;
            d /= big;
            d_prev /= big;
        }
    }
    p / d
}

/// `ln sum_{k<n} p_k(x)^2` for the orthonormal family.
fn ln_christoffel_sum(rec: &Recurrence, x: f64) -> f64 {
    let n = rec.diag.len();
    let mut ln_scale = -0.5 * rec.ln_mu0;
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut sum = 1.0;
    for k in 0..n - 1 {
        let b_next = rec.off[k];
        let b_k = if k == 0 { 0.0 } else { rec.off[k - 1] };
        let p_next = ((x - rec.diag[k]) * p - b_k * p_prev) / b_next;
        p_prev = p;
        p = p_next;
        sum += p * p;
        if p.abs() > 1e100 {
            let s = p.abs();
            p /= s;
            p_prev /= s;
            sum /= s * s;
            ln_scale += s.ln();
        }
    }
    sum.ln() + 2.0 * ln_scale
}

/// Build a quadrature rule with `order` nodes.
pub fn make_quadrature(kind: QuadratureKind, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return invalid("quadrature order must be at least 1");
    }
    if let QuadratureKind::GaussLaguerre { exponent } = kind {
        if !(exponent > -1.0) || !exponent.is_finite() {
            return invalid(format!("Laguerre exponent {exponent} must exceed -1"));
        }
    }
    if kind == QuadratureKind::TrapezoidAngular {
        let h = 2.0 * std::f64::consts::PI / order as f64;
        return Ok(QuadratureRule {
            kind,
            nodes: (0..order).map(|j| j as f64 * h).collect(),
            weights: vec![h; order],
            plain_weights: vec![h; order],
            ln_weights: vec![h.ln(); order],
        });
    }

    let rec = kind.recurrence(order);
    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i == j {
            rec.diag[i]
        } else if i + 1 == j {
            rec.off[i]
        } else if j + 1 == i {
            rec.off[j]
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let step = newton_ratio(&rec, *x);
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    for pair in nodes.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Quadrature(format!(
                "{kind:?} order {order}: nodes failed to separate"
            )));
        }
    }

    let mut weights = Vec::with_capacity(order);
    let mut plain_weights = Vec::with_capacity(order);
    let mut ln_weights = Vec::with_capacity(order);
    for &x in &nodes {
        let ln_w = -ln_christoffel_sum(&rec, x);
        let ln_weight_fn = kind
            .ln_weight(x)
            .ok_or_else(|| Error::Quadrature(format!("{kind:?}: node {x} outside support")))?;
        if !ln_w.is_finite() {
            return Err(Error::Quadrature(format!(
                "{kind:?} order {order}: weight at node {x} is not a positive finite number"
            )));
        }
        weights.push(ln_w.exp());
        ln_weights.push(ln_w);
        plain_weights.push((ln_w - ln_weight_fn).exp());
    }

    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
        plain_weights,
        ln_weights,
    })
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `sum_i w_i f(x_i)`: the integral of `f` against the weight function.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Plain integral `∫ f dx` for integrands that already decay like the weight.
    pub fn integrate_plain(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.plain_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affinely map a Legendre rule from `[-1, 1]` to `[a, b]`, returning
    /// `(nodes, plain weights)`.
    pub fn mapped_to(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.plain_weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }
}
