//! Galerkin matrix of the relative two-anyon operator
//! `2(-i∇ + α r^⊥/|r|²)² + r_x²/2 + r_y²/(2ε²)` in the isotropic
//! Aharonov-Bohm oscillator basis `e^{imθ} R_{n,|m+α|}(r) / sqrt(2π)`.
//!
//! Split as `2[(-i∇ + αA)² + ω²r²/4] + (1/2 - ω²/2) r² + (1/ε² - 1) r² (1 - cos 2θ) / 4`.
//! The bracket is diagonal, `r²` is tridiagonal inside an `m` block and
//! `r² cos 2θ` couples `m` to `m ± 2`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::{AssemblyMeta, SparseSymmetric};
use crate::error::{invalid, Error, Result};
use crate::oscillator_basis::radial::laguerre_scaled;
use crate::oscillator_basis::{make_quadrature, ABBasisIndex, QuadratureKind};

/// Entries below this magnitude are not stored.
pub const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeProblem {
    pub alpha: f64,
    pub epsilon: f64,
    pub omega_b: f64,
    pub n_max: usize,
    /// Even; the basis holds every even `m` with `|m| <= m_max`.
    pub m_max: usize,
    /// Minimum Gauss-Laguerre order for the cross-channel integrals. The
    /// order actually used is at least `n_max + 2`, which is exact.
    pub radial_order: usize,
}

impl RelativeProblem {
    /// Problem at the default basis scale `ε^{-1/2}`.
    pub fn new(alpha: f64, epsilon: f64, n_max: usize, m_max: usize) -> Result<Self> {
        let p = Self {
            alpha,
            epsilon,
            omega_b: epsilon.powf(-0.5),
            n_max,
            m_max,
            radial_order: 0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_omega_b(mut self, omega_b: f64) -> Result<Self> {
        self.omega_b = omega_b;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return invalid(format!(
                "statistics parameter must lie in (0, 2), got {}",
                self.alpha
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return invalid(format!("epsilon must lie in (0, 1], got {}", self.epsilon));
        }
        if !(self.omega_b > 0.0 && self.omega_b.is_finite()) {
            return invalid(format!(
                "basis scale must be positive, got {}",
                self.omega_b
            ));
        }
        if self.n_max < 1 || self.m_max < 1 {
            return invalid("truncations must be at least 1");
        }
        if !self.m_max.is_multiple_of(2) {
            return invalid(format!(
                "angular truncation must be even, got {}",
                self.m_max
            ));
        }
        Ok(())
    }

    pub fn channels(&self) -> Vec<i64> {
        let mm = self.m_max as i64;
        (-mm..=mm).step_by(2).collect()
    }

    pub fn dimension(&self) -> usize {
        (self.n_max + 1) * (self.m_max + 1)
    }

    /// Basis label of matrix row `i`: channels in increasing `m`, `n` fastest.
    pub fn basis_index(&self, i: usize) -> ABBasisIndex {
        let nb = self.n_max + 1;
        let m = -(self.m_max as i64) + 2 * (i / nb) as i64;
        ABBasisIndex {
            n: i % nb,
            m,
            nu: (m as f64 + self.alpha).abs(),
        }
    }

    pub fn meta(&self) -> AssemblyMeta {
        AssemblyMeta {
            alpha: self.alpha,
            epsilon: self.epsilon,
            omega_b: self.omega_b,
            n_max: self.n_max,
            m_max: self.m_max,
            radial_order: self.quadrature_order(),
        }
    }

    pub fn quadrature_order(&self) -> usize {
        self.radial_order.max(self.n_max + 2)
    }

    /// Twice both truncations, same scale and quadrature floor.
    pub fn doubled(&self) -> Self {
        Self {
            n_max: 2 * self.n_max,
            m_max: 2 * self.m_max,
            ..self.clone()
        }
    }
}

/// `⟨n'|r²|n⟩` inside one channel from the Laguerre three-term recurrence.
pub fn r2_same_channel(nu: f64, omega: f64, n: usize, n2: usize) -> f64 {
    let s = 2.0 / omega;
    let (lo, hi) = if n <= n2 { (n, n2) } else { (n2, n) };
    if lo == hi {
        s * (2.0 * lo as f64 + 1.0 + nu)
    } else if hi == lo + 1 {
        -s * (hi as f64 * (hi as f64 + nu)).sqrt()
    } else {
        0.0
    }
}

/// Radial `∫ R_{n,ν} R_{n',ν'} r² r dr` for every `n, n' <= n_max`, by the
/// Gauss-Laguerre rule of exponent `(ν + ν')/2 + 1` (exact for the polynomial parts).
pub fn r2_cross_channel(
    nu: f64,
    nu2: f64,
    omega: f64,
    n_max: usize,
    order: usize,
) -> Result<Vec<Vec<f64>>> {
    let expo = 0.5 * (nu + nu2) + 1.0;
    let rule = make_quadrature(
        QuadratureKind::GaussLaguerre { exponent: expo },
        order.max(n_max + 2),
    )?;
    let nb = n_max + 1;
    let mut out = vec![vec![0.0; nb]; nb];
    let mut la = vec![0.0; nb];
    let mut lb = vec![0.0; nb];
    // ℓ_0 normalizations folded into the weights; both overflow separately for large ν
    let ln_norm = -0.5 * (libm::lgamma(nu + 1.0) + libm::lgamma(nu2 + 1.0));
    for (&t, &lw) in rule.nodes.iter().zip(&rule.ln_weights) {
        let w = (lw + ln_norm).exp();
        laguerre_scaled(nu, t, 1.0, &mut la);
        laguerre_scaled(nu2, t, 1.0, &mut lb);
        for (row, a) in out.iter_mut().zip(&la) {
            for (cell, b) in row.iter_mut().zip(&lb) {
                *cell += w * a * b;
            }
        }
    }
    let s = 2.0 / omega;
    for row in out.iter_mut() {
        for cell in row.iter_mut() {
            *cell *= s;
            if !cell.is_finite() {
                return Err(Error::Quadrature(format!(
                    "non-finite radial integral for exponents {nu}, {nu2}"
                )));
            }
        }
    }
    Ok(out)
}

pub fn assemble_relative(p: &RelativeProblem) -> Result<SparseSymmetric> {
    p.validate()?;
    let nb = p.n_max + 1;
    let w = p.omega_b;
    let c1 = 0.5 - 0.5 * w * w;
    let c2 = 0.25 * (1.0 / (p.epsilon * p.epsilon) - 1.0);
    let chans = p.channels();
    let nus: Vec<f64> = chans.iter().map(|&m| (m as f64 + p.alpha).abs()).collect();
    let order = p.quadrature_order();

    // cross-channel blocks only depend on the exponent pair
    let mut cache: HashMap<(u64, u64), usize> = HashMap::new();
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut block_of = Vec::with_capacity(chans.len().saturating_sub(1));
    for b in 0..chans.len().saturating_sub(1) {
        let key = (nus[b].to_bits(), nus[b + 1].to_bits());
        let id = *cache.entry(key).or_insert_with(|| {
            pairs.push((nus[b], nus[b + 1]));
            pairs.len() - 1
        });
        block_of.push(id);
    }
    let blocks: Vec<Vec<Vec<f64>>> = if c2 == 0.0 {
        Vec::new()
    } else {
        pairs
            .par_iter()
            .map(|&(a, b)| r2_cross_channel(a, b, w, p.n_max, order))
            .collect::<Result<_>>()?
    };

    let per_channel: Vec<Vec<(usize, usize, f64)>> = (0..chans.len())
        .into_par_iter()
        .map(|b| {
            let nu = nus[b];
            let base = b * nb;
            let mut t = Vec::with_capacity(4 * nb + nb * nb);
            for n in 0..nb {
                let diag = 2.0 * w * (2.0 * n as f64 + nu + 1.0)
                    + (c1 + c2) * r2_same_channel(nu, w, n, n);
                t.push((base + n, base + n, diag));
                if n + 1 < nb {
                    t.push((
                        base + n,
                        base + n + 1,
                        (c1 + c2) * r2_same_channel(nu, w, n, n + 1),
                    ));
                }
            }
            if c2 != 0.0 && b + 1 < chans.len() {
                let blk = &blocks[block_of[b]];
                let next = base + nb;
                for (n, row) in blk.iter().enumerate() {
                    for (n2, &v) in row.iter().enumerate() {
                        t.push((base + n, next + n2, -0.5 * c2 * v));
                    }
                }
            }
            t
        })
        .collect();

    let mut trip = Vec::new();
    for t in per_channel {
        for (r, c, v) in t {
            if !v.is_finite() {
                return Err(Error::Assembly(format!("non-finite element at ({r}, {c})")));
            }
            if r == c && v <= 0.0 && c1 + c2 >= 0.0 {
                return Err(Error::Assembly(format!("non-positive diagonal {v} at {r}")));
            }
            if v.abs() >= DROP_TOLERANCE {
                trip.push((r, c, v));
            }
        }
    }
    Ok(SparseSymmetric::from_triplets(p.dimension(), trip)?.with_meta(p.meta()))
}
