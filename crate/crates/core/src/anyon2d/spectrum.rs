//! Full two-anyon levels: exact center-of-mass oscillator plus the relative
//! Galerkin spectrum, with a truncation-doubling convergence check.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::assembly::RelativeProblem;
use super::cache::assemble_cached;
use super::lanczos::{lanczos_with, LanczosOptions, SpectralResult};
use super::shift_invert::shift_invert_smallest;
use super::sparse::SparseSymmetric;
use crate::error::{invalid, Error, Result};

/// Relative change under doubling below which a level counts as converged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TruncationPolicy {
    /// `n_max = ceil(8.5 / sqrt(ε))` (at least 8) and `m_max = 2 n_max`.
    Auto,
    Fixed {
        n_max: usize,
        m_max: usize,
    },
}

impl TruncationPolicy {
    pub fn resolve(self, epsilon: f64) -> (usize, usize) {
        match self {
            TruncationPolicy::Auto => {
                let n = ((8.5 / epsilon.sqrt()).ceil() as usize).max(8);
                (n, 2 * n)
            }
            TruncationPolicy::Fixed { n_max, m_max } => (n_max, m_max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverKind {
    /// Lanczos on `-(M - σI)^{-1}` with `σ = 1/ε`, below the relative spectrum.
    ShiftInvert,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub policy: TruncationPolicy,
    /// `None` means `ε^{-1/2}`.
    pub omega_b: Option<f64>,
    pub radial_order: usize,
    pub solver: SolverKind,
    pub lanczos: LanczosOptions,
    /// Re-solve at doubled truncations.
    pub check_doubling: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            policy: TruncationPolicy::Auto,
            omega_b: None,
            radial_order: 0,
            solver: SolverKind::ShiftInvert,
            lanczos: LanczosOptions::default(),
            check_doubling: true,
            cache_dir: None,
        }
    }
}

impl SpectrumOptions {
    pub fn problem(&self, alpha: f64, epsilon: f64) -> Result<RelativeProblem> {
        let (n_max, m_max) = self.policy.resolve(epsilon);
        let mut p = RelativeProblem::new(alpha, epsilon, n_max, m_max)?;
        if let Some(w) = self.omega_b {
            p = p.with_omega_b(w)?;
        }
        p.radial_order = self.radial_order;
        Ok(p)
    }
}

/// Exact level `(2p + 1) + (2q + 1)/ε` of the center-of-mass oscillator.
pub fn cm_level(p: usize, q: usize, epsilon: f64) -> f64 {
    (2 * p + 1) as f64 + (2 * q + 1) as f64 / epsilon
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoAnyonLevel {
    pub value: f64,
    /// Center-of-mass quantum numbers along x and y.
    pub cm: (usize, usize),
    /// Index into the relative spectrum.
    pub rel_index: usize,
    pub cm_energy: f64,
    pub rel_energy: f64,
    /// Value at the base truncation, before doubling.
    pub base_value: f64,
    pub residual: f64,
    pub solver_converged: bool,
    /// Doubling both truncations moved the level by less than the tolerance.
    pub truncation_converged: bool,
}

impl TwoAnyonLevel {
    pub fn converged(&self) -> bool {
        self.solver_converged && self.truncation_converged
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoAnyonSpectrum {
    pub alpha: f64,
    pub epsilon: f64,
    pub levels: Vec<TwoAnyonLevel>,
    pub problem: RelativeProblem,
    /// Relative spectrum at the base truncation.
    pub relative: SpectralResult,
    /// Relative spectrum at doubled truncation, when checked.
    pub refined: Option<SpectralResult>,
    pub cache_hits: usize,
}

impl TwoAnyonSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }
}

fn solve_relative(
    m: &SparseSymmetric,
    k: usize,
    epsilon: f64,
    opts: &SpectrumOptions,
) -> Result<SpectralResult> {
    let mut res = match opts.solver {
        SolverKind::ShiftInvert => {
            match shift_invert_smallest(m, k, 1.0 / epsilon, &opts.lanczos) {
                Err(Error::Singular(_)) => lanczos_with(m, k, &opts.lanczos)?,
                other => other?,
            }
        }
        SolverKind::Lanczos => lanczos_with(m, k, &opts.lanczos)?,
    };
    res.truncation = m.meta.clone();
    Ok(res)
}

/// The `k` smallest two-anyon levels at statistics `alpha` and squeeze `epsilon`.
pub fn two_anyon_spectrum(
    alpha: f64,
    epsilon: f64,
    k: usize,
    opts: &SpectrumOptions,
) -> Result<TwoAnyonSpectrum> {
    if k == 0 {
        return invalid("need at least one level");
    }
    let problem = opts.problem(alpha, epsilon)?;
    if k >= problem.dimension() {
        return invalid(format!(
            "k = {k} exceeds the relative basis dimension {}",
            problem.dimension()
        ));
    }
    let mut hits = 0;
    let (m, hit) = assemble_cached(&problem, opts.cache_dir.as_deref())?;
    hits += hit as usize;
    let relative = solve_relative(&m, k, epsilon, opts)?;
    drop(m);
    let refined = if opts.check_doubling {
        let big = problem.doubled();
        let (m2, hit) = assemble_cached(&big, opts.cache_dir.as_deref())?;
        hits += hit as usize;
        Some(solve_relative(&m2, k, epsilon, opts)?)
    } else {
        None
    };

    let mut cands: Vec<TwoAnyonLevel> = Vec::new();
    for p in 0..k {
        for q in 0..k {
            let cm = cm_level(p, q, epsilon);
            for i in 0..relative.eigenvalues.len() {
                let base = relative.eigenvalues[i];
                let (rel, residual, solver_ok, trunc_ok) = match &refined {
                    Some(r) => {
                        let fine = r.eigenvalues[i];
                        let change = (cm + base - (cm + fine)).abs() / (cm + fine).abs();
                        (
                            fine,
                            r.residuals[i],
                            r.converged[i] && relative.converged[i],
                            change < TRUNCATION_TOLERANCE,
                        )
                    }
                    None => (base, relative.residuals[i], relative.converged[i], false),
                };
                cands.push(TwoAnyonLevel {
                    value: cm + rel,
                    cm: (p, q),
                    rel_index: i,
                    cm_energy: cm,
                    rel_energy: rel,
                    base_value: cm + base,
                    residual,
                    solver_converged: solver_ok,
                    truncation_converged: trunc_ok,
                });
            }
        }
    }
    cands.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.cm.cmp(&b.cm))
            .then(a.rel_index.cmp(&b.rel_index))
    });
    cands.truncate(k);
    Ok(TwoAnyonSpectrum {
        alpha,
        epsilon,
        levels: cands,
        problem,
        relative,
        refined,
        cache_hits: hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_ground_level() {
        let s = two_anyon_spectrum(0.5, 1.0, 3, &SpectrumOptions::default()).unwrap();
        assert!((s.levels[0].value - 5.0).abs() < 1e-10);
        assert!(s.levels[0].converged());
        assert_eq!(s.levels[0].cm, (0, 0));
        // 2 + 5 (relative n = 0, m = 2 or m = -2 at ν = 1.5) and 4 + 3 (CM excitation)
        let v = s.values();
        assert!(
            (v[1] - 7.0).abs() < 1e-10 && (v[2] - 7.0).abs() < 1e-10,
            "{v:?}"
        );
    }

    #[test]
    fn policy_scales_with_epsilon() {
        assert_eq!(TruncationPolicy::Auto.resolve(1.0), (9, 18));
        assert_eq!(TruncationPolicy::Auto.resolve(0.02), (61, 122));
        assert_eq!(
            TruncationPolicy::Fixed { n_max: 3, m_max: 4 }.resolve(0.1),
            (3, 4)
        );
    }

    #[test]
    fn upper_bound_by_one_dimensional_limit() {
        for eps in [0.5, 0.2] {
            let s = two_anyon_spectrum(0.7, eps, 1, &SpectrumOptions::default()).unwrap();
            assert!(s.levels[0].value <= 2.0 / eps + 4.0 + 1e-9);
        }
    }

    #[test]
    fn solvers_agree() {
        let base = SpectrumOptions {
            policy: TruncationPolicy::Fixed {
                n_max: 10,
                m_max: 10,
            },
            check_doubling: false,
            ..Default::default()
        };
        let a = two_anyon_spectrum(1.3, 0.3, 4, &base).unwrap();
        let b = two_anyon_spectrum(
            1.3,
            0.3,
            4,
            &SpectrumOptions {
                solver: SolverKind::Lanczos,
                ..base
            },
        )
        .unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-8);
        }
    }
}
