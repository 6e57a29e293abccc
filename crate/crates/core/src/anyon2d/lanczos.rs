//! Thick-restart Lanczos for the smallest eigenpairs of a real symmetric
//! operator, with full (twice-applied classical Gram-Schmidt) reorthogonalization.
//!
//! Converged vectors from the first pass are locked and a second pass looks
//! for anything lower in their orthogonal complement, which catches copies of
//! degenerate eigenvalues that a single Krylov space can miss.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::sparse::{AssemblyMeta, SymmetricOperator};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    pub tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    /// Krylov subspace size; `None` picks one from `k`.
    pub krylov_dim: Option<usize>,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20_000,
            krylov_dim: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// `‖Hv - λv‖` per pair, recomputed from the returned vectors.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub truncation: Option<AssemblyMeta>,
    pub matvecs: usize,
}

impl SpectralResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

struct Pair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orthogonalize(w: &mut [f64], against: &[&[f64]]) {
    for _ in 0..2 {
        for v in against {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

struct Driver<'a, Op: SymmetricOperator + ?Sized> {
    op: &'a Op,
    tol: f64,
    budget: usize,
    used: usize,
    rng: ChaCha8Rng,
}

impl<Op: SymmetricOperator + ?Sized> Driver<'_, Op> {
    fn apply(&mut self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.op.apply(x, &mut y);
        self.used += 1;
        y
    }

    /// Unit vector orthogonal to `against`, or `None` if they span everything.
    fn random_unit(&mut self, against: &[&[f64]]) -> Option<Vec<f64>> {
        let n = self.op.dim();
        for _ in 0..4 {
            let mut v: Vec<f64> = (0..n)
                .map(|_| StandardNormal.sample(&mut self.rng))
                .collect();
            let before = norm(&v);
            orthogonalize(&mut v, against);
            let after = norm(&v);
            if after > 1e-8 * before {
                v.iter_mut().for_each(|x| *x /= after);
                return Some(v);
            }
        }
        None
    }

    fn residual(&mut self, value: f64, x: &[f64]) -> f64 {
        let mut r = self.apply(x);
        axpy(-value, x, &mut r);
        norm(&r)
    }

    /// The `want` smallest Ritz pairs in the complement of `locked`.
    fn run(&mut self, locked: &[Vec<f64>], want: usize, krylov: Option<usize>) -> Vec<Pair> {
        let n = self.op.dim();
        let free = n - locked.len();
        let want = want.min(free);
        if want == 0 {
            return Vec::new();
        }
        let m = krylov
            .unwrap_or((2 * want + 20).max(40))
            .max(want + 2)
            .min(free);
        let locked_refs: Vec<&[f64]> = locked.iter().map(|v| v.as_slice()).collect();
        let mut basis: Vec<Vec<f64>> = match self.random_unit(&locked_refs) {
            Some(v) => vec![v],
            None => return Vec::new(),
        };
        let mut t = DMatrix::<f64>::zeros(m, m);
        let mut start = 0;
        loop {
            let mut tail_beta = 0.0;
            let mut tail: Option<Vec<f64>> = None;
            for j in start..m {
                let mut w = self.apply(&basis[j]);
                t[(j, j)] = dot(&basis[j], &w);
                let mut refs = locked_refs.clone();
                refs.extend(basis.iter().map(|v| v.as_slice()));
                orthogonalize(&mut w, &refs);
                let beta = norm(&w);
                let scale = t[(j, j)].abs().max(1.0);
                let broke = beta <= 1e-12 * scale;
                if j + 1 < m {
                    let next = if broke {
                        // invariant subspace: continue with an unrelated direction
                        match self.random_unit(&refs) {
                            Some(v) => v,
                            None => break,
                        }
                    } else {
                        t[(j, j + 1)] = beta;
                        t[(j + 1, j)] = beta;
                        w.iter().map(|x| x / beta).collect()
                    };
                    basis.push(next);
                } else if !broke {
                    tail_beta = beta;
                    tail = Some(w.iter().map(|x| x / beta).collect());
                }
            }
            let k = basis.len();
            let sub = t.view((0, 0), (k, k)).into_owned();
            let eig = SymmetricEigen::new(sub);
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let est: Vec<f64> = order
                .iter()
                .map(|&i| (tail_beta * eig.eigenvectors[(k - 1, i)]).abs())
                .collect();
            let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let take = want.min(k);
            // the estimate runs a little optimistic against the recomputed residual
            let done = (0..take).all(|i| est[i] <= 0.1 * self.tol * (1.0 + theta[i].abs()));
            let out_of_budget = self.used + m >= self.budget;
            let ritz = |cols: usize, basis: &[Vec<f64>]| -> Vec<Vec<f64>> {
                (0..cols)
                    .map(|c| {
                        let col = order[c];
                        let mut x = vec![0.0; n];
                        for (j, v) in basis.iter().enumerate() {
                            axpy(eig.eigenvectors[(j, col)], v, &mut x);
                        }
                        x
                    })
                    .collect()
            };
            if done || out_of_budget || tail.is_none() || k < m {
                let vecs = ritz(take, &basis);
                return vecs
                    .into_iter()
                    .enumerate()
                    .map(|(i, mut x)| {
                        let nx = norm(&x);
                        x.iter_mut().for_each(|v| *v /= nx);
                        let residual = self.residual(theta[i], &x);
                        Pair {
                            value: theta[i],
                            residual,
                            converged: residual <= self.tol * (1.0 + theta[i].abs()),
                            vector: x,
                        }
                    })
                    .collect();
            }
            let keep = (want + (m - want) / 2).min(m - 1);
            let mut next = ritz(keep, &basis);
            next.push(tail.expect("checked above"));
            t.fill(0.0);
            for i in 0..keep {
                t[(i, i)] = theta[i];
                let c = tail_beta * eig.eigenvectors[(k - 1, order[i])];
                t[(i, keep)] = c;
                t[(keep, i)] = c;
            }
            basis = next;
            start = keep;
        }
    }
}

/// `k` smallest eigenpairs with explicit options.
pub fn lanczos_with<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    k: usize,
    opts: &LanczosOptions,
) -> Result<SpectralResult> {
    let n = op.dim();
    if k == 0 || k >= n {
        return invalid(format!(
            "need 0 < k < dimension, got k = {k}, dimension = {n}"
        ));
    }
    if !(opts.tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {}", opts.tol));
    }
    let mut d = Driver {
        op,
        tol: opts.tol,
        budget: opts.max_iter,
        used: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };
    let mut found: Vec<Pair> = d.run(&[], k, opts.krylov_dim);
    if found.iter().all(|p| p.converged) {
        loop {
            found.sort_by(|a, b| a.value.total_cmp(&b.value));
            if found.len() >= n || d.used >= d.budget {
                break;
            }
            let kth = found[k.min(found.len()) - 1].value;
            let locked: Vec<Vec<f64>> = found.iter().map(|p| p.vector.clone()).collect();
            let probe = d.run(&locked, 1, opts.krylov_dim);
            match probe.into_iter().next() {
                Some(p) if p.value < kth - opts.tol * (1.0 + kth.abs()) => {
                    let ok = p.converged;
                    found.push(p);
                    if !ok {
                        break;
                    }
                }
                _ => break,
            }
        }
    }
    found.sort_by(|a, b| a.value.total_cmp(&b.value));
    found.truncate(k);
    Ok(SpectralResult {
        eigenvalues: found.iter().map(|p| p.value).collect(),
        residuals: found.iter().map(|p| p.residual).collect(),
        converged: found.iter().map(|p| p.converged).collect(),
        eigenvectors: found.into_iter().map(|p| p.vector).collect(),
        truncation: None,
        matvecs: d.used,
    })
}

pub fn lanczos_smallest<Op: SymmetricOperator + ?Sized>(
    op: &Op,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<SpectralResult> {
    lanczos_with(
        op,
        k,
        &LanczosOptions {
            tol,
            max_iter,
            ..Default::default()
        },
    )
}
