//! Overlap of two-anyon eigenfunctions with dressed one-dimensional states
//! `ψ_k(x₁, x₂) u_ε(y₁) u_ε(y₂) e^{-iαS}`.
//!
//! Integration runs in center-of-mass and relative polar coordinates
//! `(X, Y, r, θ)` with `r = s²` and θ split where `x₁ = x₂`, so every panel
//! sees a smooth integrand.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::projection::{project_phi_eps, XGrid};
use super::state::TwoAnyonState;
use crate::anyon2d::{two_anyon_spectrum, SpectrumOptions, TwoAnyonSpectrum};
use crate::error::{invalid, Error, Result};
use crate::oscillator_basis::{hermite_eval, make_quadrature, HermiteIndex, QuadratureKind};
use crate::tonks_girardeau::{tg_eigenfunction_eval, tg_levels, TGEigenstate};

#[derive(Debug, Clone)]
pub struct OverlapOptions {
    pub spectrum: SpectrumOptions,
    pub x_order: usize,
    /// Radial panel order in `s = sqrt r`; `None` scales with the truncation.
    pub s_order: Option<usize>,
    /// Order per angular half-panel; `None` scales with the truncation.
    pub theta_order: Option<usize>,
    pub r_max: f64,
    /// Skip the φ^ε projection, which dominates the cost.
    pub with_projection: bool,
    pub grid: XGrid,
    pub y_order: usize,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        Self {
            spectrum: SpectrumOptions {
                check_doubling: false,
                ..SpectrumOptions::default()
            },
            x_order: 24,
            s_order: None,
            theta_order: None,
            r_max: 11.0,
            with_projection: true,
            grid: XGrid::default(),
            y_order: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub alpha: f64,
    pub epsilon: f64,
    pub k: usize,
    pub overlap: f64,
    pub l2_dist: f64,
    pub h1_dist_diag: f64,
    /// Same overlap without the gauge phase.
    pub control_overlap: f64,
    pub diag_max: f64,
    pub symmetry_error: f64,
}

/// One-dimensional eigenspace containing the `k`-th level, `k` from 1.
pub fn tg_eigenspace(k: usize) -> Result<Vec<TGEigenstate>> {
    let all = tg_levels(2, k + 8)?;
    let e = all[k - 1].orbitals.energy();
    Ok(all
        .into_iter()
        .filter(|s| s.orbitals.energy() == e)
        .collect())
}

pub struct OverlapPair {
    pub dressed: f64,
    pub control: f64,
}

/// Squared norm of the projection of `state` onto the dressed span of `refs`.
pub fn dressed_overlap(
    state: &TwoAnyonState,
    refs: &[TGEigenstate],
    opts: &OverlapOptions,
) -> Result<OverlapPair> {
    if refs.is_empty() {
        return invalid("need at least one reference state");
    }
    let p = &state.problem;
    let (alpha, eps) = (p.alpha, p.epsilon);
    let s_order = opts.s_order.unwrap_or(2 * p.n_max + 80);
    let th_order = opts.theta_order.unwrap_or(p.m_max + 60);
    let (ss, sw) =
        make_quadrature(QuadratureKind::GaussLegendre, s_order)?.mapped_to(0.0, opts.r_max.sqrt());
    let th_rule = make_quadrature(QuadratureKind::GaussLegendre, th_order)?;
    let mut ths = Vec::with_capacity(2 * th_order);
    let mut thw = Vec::with_capacity(2 * th_order);
    for (a, b) in [(-FRAC_PI_2, FRAC_PI_2), (FRAC_PI_2, 3.0 * FRAC_PI_2)] {
        let (n, w) = th_rule.mapped_to(a, b);
        ths.extend(n);
        thw.extend(w);
    }

    // X and Y factors, Gaussian-weighted rules with plain weights
    let gh = make_quadrature(QuadratureKind::GaussHermite, opts.x_order)?;
    let xs: Vec<f64> = gh.nodes.iter().map(|t| t / 2f64.sqrt()).collect();
    let xw: Vec<f64> = gh.plain_weights.iter().map(|w| w / 2f64.sqrt()).collect();
    let phi_x = |x: f64| 2f64.powf(0.25) * hermite_eval(HermiteIndex(state.cm.0), 2f64.sqrt() * x);
    let ys_scale = (eps / 2.0).sqrt();
    let i_y: f64 = gh
        .nodes
        .iter()
        .zip(&gh.plain_weights)
        .map(|(&t, &w)| {
            let y = ys_scale * t;
            ys_scale
                * w
                * (2.0 / eps).powf(0.25)
                * hermite_eval(HermiteIndex(state.cm.1), (2.0 / eps).sqrt() * y)
                * (-y * y / eps).exp()
        })
        .sum();
    let pref = i_y / (PI * eps).sqrt();
    // ∫ e^{-2Y²/ε} dY / (πε)
    let gram_pref = (PI * eps / 2.0).sqrt() / (PI * eps);

    let d = refs.len();
    if d > 8 {
        return invalid(format!("eigenspace of dimension {d} is too large"));
    }
    struct Acc {
        b: Vec<Complex64>,
        c: Vec<Complex64>,
        g: Vec<f64>,
        norm: f64,
    }
    let zero = || Acc {
        b: vec![Complex64::new(0.0, 0.0); d],
        c: vec![Complex64::new(0.0, 0.0); d],
        g: vec![0.0; d * d],
        norm: 0.0,
    };
    let per_s: Vec<Result<Acc>> = ss
        .par_iter()
        .zip(&sw)
        .map(|(&s, &w)| {
            let mut acc = zero();
            let r = s * s;
            let jac = w * 2.0 * s * r;
            let g = state.channel_radial(r);
            let mut f = vec![0.0; d];
            let mut ff = vec![0.0; d * d];
            for (&th, &tw) in ths.iter().zip(&thw) {
                let (rx, ry) = (r * th.cos(), r * th.sin());
                let chi = state.relative_from_channels(&g, th);
                f.iter_mut().for_each(|v| *v = 0.0);
                ff.iter_mut().for_each(|v| *v = 0.0);
                for (&x, &xw) in xs.iter().zip(&xw) {
                    let mut vals = [0.0; 8];
                    for (i, st) in refs.iter().enumerate() {
                        vals[i] = tg_eigenfunction_eval(st, &[x + 0.5 * rx, x - 0.5 * rx])?;
                        f[i] += xw * phi_x(x) * vals[i];
                    }
                    for i in 0..d {
                        for j in 0..d {
                            ff[i * d + j] += xw * vals[i] * vals[j];
                        }
                    }
                }
                let wt = jac * tw;
                let gy = (-ry * ry / (4.0 * eps)).exp();
                let phase = if rx == 0.0 { 0.0 } else { (ry / rx).atan() };
                let e = Complex64::from_polar(1.0, -alpha * phase);
                for i in 0..d {
                    let a = chi.conj() * (pref * gy * f[i]);
                    acc.b[i] += wt * a * e;
                    acc.c[i] += wt * a;
                    for j in 0..d {
                        acc.g[i * d + j] += wt * gram_pref * gy * gy * ff[i * d + j];
                    }
                }
                acc.norm += wt * chi.norm_sqr();
            }
            Ok(acc)
        })
        .collect();
    let mut tot = zero();
    for a in per_s {
        let a = a?;
        for i in 0..d {
            tot.b[i] += a.b[i];
            tot.c[i] += a.c[i];
        }
        for (t, v) in tot.g.iter_mut().zip(&a.g) {
            *t += v;
        }
        tot.norm += a.norm;
    }
    let gram = DMatrix::from_row_slice(d, d, &tot.g);
    let chol = nalgebra::Cholesky::new(gram)
        .ok_or_else(|| Error::Quadrature("dressed states are not independent".into()))?;
    let quad = |b: &[Complex64]| -> f64 {
        let re = chol.solve(&DVector::from_fn(d, |i, _| b[i].re));
        let im = chol.solve(&DVector::from_fn(d, |i, _| b[i].im));
        (0..d)
            .map(|i| b[i].re * re[i] + b[i].im * im[i])
            .sum::<f64>()
            / tot.norm
    };
    let dressed = quad(&tot.b);
    let control = quad(&tot.c);
    for v in [dressed, control] {
        if !(v <= 1.0 + 1e-8) {
            return Err(Error::Quadrature(format!(
                "overlap {v} exceeds 1; quadrature or normalization fault"
            )));
        }
    }
    Ok(OverlapPair { dressed, control })
}

/// State of the `k`-th level (from 1) of a computed spectrum.
pub fn level_state(sol: &TwoAnyonSpectrum, k: usize) -> Result<TwoAnyonState> {
    let lv = sol
        .levels
        .get(k - 1)
        .ok_or_else(|| Error::InvalidParameter(format!("level {k} was not computed")))?;
    let v = sol
        .relative
        .eigenvectors
        .get(lv.rel_index)
        .ok_or_else(|| Error::InvalidParameter("relative eigenvector missing".into()))?;
    TwoAnyonState::new(sol.problem.clone(), v.clone(), lv.cm)
}

pub(crate) fn check_epsilon_ladder(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return invalid("empty epsilon list");
    }
    for &e in eps_list {
        if !(e > 0.0 && e <= 1.0) {
            return invalid(format!("epsilon {e} outside (0, 1]"));
        }
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("epsilon list must be strictly decreasing");
    }
    Ok(())
}

pub fn overlap_study(
    alpha: f64,
    eps_list: &[f64],
    k_max: usize,
    opts: &OverlapOptions,
) -> Result<Vec<OverlapRow>> {
    check_epsilon_ladder(eps_list)?;
    if k_max == 0 {
        return invalid("need at least one level");
    }
    let mut rows = Vec::new();
    for &eps in eps_list {
        let sol = two_anyon_spectrum(alpha, eps, k_max, &opts.spectrum)?;
        for k in 1..=k_max {
            let st = level_state(&sol, k)?;
            let refs = tg_eigenspace(k)?;
            let ov = dressed_overlap(&st, &refs, opts)?;
            let (l2, h1, dmax, sym) = if opts.with_projection {
                let pr = project_phi_eps(&st, opts.grid, opts.y_order)?;
                (
                    pr.l2_distance(&refs)?,
                    pr.h1_distance(&refs)?,
                    pr.diagonal_max(),
                    pr.symmetry_error(),
                )
            } else {
                (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
            };
            rows.push(OverlapRow {
                alpha,
                epsilon: eps,
                k,
                overlap: ov.dressed,
                l2_dist: l2,
                h1_dist_diag: h1,
                control_overlap: ov.control,
                diag_max: dmax,
                symmetry_error: sym,
            });
        }
    }
    Ok(rows)
}
