//! Spectral gaps `λ²ᴰ_k - 2/ε` tracked along a decreasing ε ladder.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::overlap::check_epsilon_ladder;
use crate::anyon2d::{two_anyon_spectrum, SpectrumOptions};
use crate::error::{invalid, Result};
use crate::tonks_girardeau::tg_levels;

pub const DEFAULT_LADDER: [f64; 6] = [1.0, 0.5, 0.2, 0.1, 0.05, 0.02];

/// Step size below which a change in the gap is treated as solver noise.
pub const TREND_NOISE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub epsilon: f64,
    pub k: usize,
    pub lambda2d: f64,
    pub gap: f64,
    pub lambda1d: f64,
    pub residual: f64,
    pub cm_p: usize,
    pub cm_q: usize,
    pub rel_idx: usize,
    pub converged: bool,
}

pub fn epsilon_sweep(
    alpha: f64,
    eps_list: &[f64],
    k_max: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<SweepRow>> {
    check_epsilon_ladder(eps_list)?;
    if k_max == 0 {
        return invalid("need at least one level");
    }
    let tg = tg_levels(2, k_max)?;
    let per_eps: Vec<Result<Vec<SweepRow>>> = eps_list
        .par_iter()
        .map(|&eps| {
            let sol = two_anyon_spectrum(alpha, eps, k_max, opts)?;
            Ok(sol
                .levels
                .iter()
                .enumerate()
                .map(|(i, lv)| SweepRow {
                    alpha,
                    epsilon: eps,
                    k: i + 1,
                    lambda2d: lv.value,
                    gap: lv.value - 2.0 / eps,
                    lambda1d: tg[i].orbitals.energy() as f64,
                    residual: lv.residual,
                    cm_p: lv.cm.0,
                    cm_q: lv.cm.1,
                    rel_idx: lv.rel_index,
                    converged: lv.converged(),
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_eps {
        rows.extend(r?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub k: usize,
    /// `|gap - λ¹ᴰ|` along the ladder.
    pub distances: Vec<f64>,
    pub monotone: bool,
    pub increments_shrink: bool,
    pub final_distance: f64,
}

/// Trend of level `k` along the ladder in `rows`, which must be ordered by
/// decreasing ε.
pub fn gap_trend(rows: &[SweepRow], k: usize) -> Result<TrendReport> {
    let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.k == k).collect();
    if sel.len() < 2 {
        return invalid(format!("level {k} appears at fewer than two epsilons"));
    }
    let distances: Vec<f64> = sel.iter().map(|r| (r.gap - r.lambda1d).abs()).collect();
    let monotone = distances.windows(2).all(|w| w[1] <= w[0] + TREND_NOISE);
    let steps: Vec<f64> = sel
        .windows(2)
        .map(|w| (w[1].gap - w[0].gap).abs())
        .collect();
    let increments_shrink = steps.windows(2).all(|w| w[1] <= w[0] + TREND_NOISE);
    Ok(TrendReport {
        k,
        final_distance: *distances.last().unwrap(),
        distances,
        monotone,
        increments_shrink,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon2d::TruncationPolicy;

    #[test]
    fn ladder_validation() {
        let o = SpectrumOptions::default();
        assert!(epsilon_sweep(1.0, &[0.5, 1.0], 1, &o).is_err());
        assert!(epsilon_sweep(1.0, &[1.5], 1, &o).is_err());
        assert!(epsilon_sweep(1.0, &[], 1, &o).is_err());
        assert!(epsilon_sweep(1.0, &[1.0], 0, &o).is_err());
    }

    #[test]
    fn fermionic_point_has_constant_gap() {
        let o = SpectrumOptions {
            policy: TruncationPolicy::Fixed {
                n_max: 16,
                m_max: 32,
            },
            check_doubling: false,
            ..Default::default()
        };
        let rows = epsilon_sweep(1.0, &[1.0, 0.5, 0.25], 1, &o).unwrap();
        for r in &rows {
            assert!((r.gap - 4.0).abs() < 1e-8, "{r:?}");
            assert_eq!(r.lambda1d, 4.0);
        }
        let t = gap_trend(&rows, 1).unwrap();
        assert!(t.monotone && t.increments_shrink);
    }
}
