//! Symmetric sparse matrices stored as their upper triangle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const PARALLEL_NNZ: usize = 200_000;

/// Parameters a matrix was assembled from, echoed into caches and manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssemblyMeta {
    pub alpha: f64,
    pub epsilon: f64,
    pub omega_b: f64,
    pub n_max: usize,
    pub m_max: usize,
    pub radial_order: usize,
}

/// Real symmetric matrix. Only entries with `row <= col` are stored, sorted by
/// `(row, col)`, without explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    dim: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    pub meta: Option<AssemblyMeta>,
    // full (both triangles) CSR copy for products
    row_ptr: Vec<usize>,
    csr_cols: Vec<usize>,
    csr_vals: Vec<f64>,
}

/// Anything that can apply a real symmetric matrix to a vector.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SparseSymmetric {
    /// Build from triplets. Entries below the diagonal are mirrored to the
    /// upper triangle; duplicates are summed.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut ent: Vec<(usize, usize, f64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return invalid(format!("entry ({r}, {c}) outside a {dim}×{dim} matrix"));
            }
            if !v.is_finite() {
                return invalid(format!("entry ({r}, {c}) is not finite"));
            }
            let (r, c) = if r <= c { (r, c) } else { (c, r) };
            ent.push((r, c, v));
        }
        ent.sort_by_key(|e| (e.0, e.1));
        let mut rows = Vec::with_capacity(ent.len());
        let mut cols = Vec::with_capacity(ent.len());
        let mut vals: Vec<f64> = Vec::with_capacity(ent.len());
        for (r, c, v) in ent {
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *vals.last_mut().expect("paired") += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            vals.push(v);
        }
        let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] != 0.0).collect();
        let rows: Vec<usize> = keep.iter().map(|&i| rows[i]).collect();
        let cols: Vec<usize> = keep.iter().map(|&i| cols[i]).collect();
        let vals: Vec<f64> = keep.iter().map(|&i| vals[i]).collect();
        Ok(Self::from_sorted_upper(dim, rows, cols, vals))
    }

    fn from_sorted_upper(dim: usize, rows: Vec<usize>, cols: Vec<usize>, vals: Vec<f64>) -> Self {
        let mut counts = vec![0usize; dim + 1];
        for (&r, &c) in rows.iter().zip(&cols) {
            counts[r + 1] += 1;
            if r != c {
                counts[c + 1] += 1;
            }
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut fill = counts;
        let nnz = row_ptr[dim];
        let mut csr_cols = vec![0usize; nnz];
        let mut csr_vals = vec![0.0; nnz];
        // lower-triangle mirrors first keeps each CSR row sorted by column
        for ((&r, &c), &v) in rows.iter().zip(&cols).zip(&vals) {
            if r != c {
                csr_cols[fill[c]] = r;
                csr_vals[fill[c]] = v;
                fill[c] += 1;
            }
        }
        for ((&r, &c), &v) in rows.iter().zip(&cols).zip(&vals) {
            csr_cols[fill[r]] = c;
            csr_vals[fill[r]] = v;
            fill[r] += 1;
        }
        Self {
            dim,
            rows,
            cols,
            vals,
            meta: None,
            row_ptr,
            csr_cols,
            csr_vals,
        }
    }

    /// Rebuild from stored upper-triangle arrays (as read back from a cache).
    pub fn from_upper_parts(
        dim: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<f64>,
    ) -> Result<Self> {
        if rows.len() != cols.len() || rows.len() != vals.len() {
            return invalid("upper-triangle arrays differ in length");
        }
        for i in 0..rows.len() {
            if rows[i] > cols[i] || cols[i] >= dim {
                return invalid(format!(
                    "entry {i} is not in the upper triangle of a {dim}×{dim} matrix"
                ));
            }
            if i > 0 && (rows[i - 1], cols[i - 1]) >= (rows[i], cols[i]) {
                return invalid("upper-triangle entries are not strictly sorted");
            }
        }
        Ok(Self::from_sorted_upper(dim, rows, cols, vals))
    }

    pub fn with_meta(mut self, meta: AssemblyMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Number of stored (upper-triangle) entries.
    pub fn nnz_upper(&self) -> usize {
        self.vals.len()
    }

    /// `(row, col, value)` with `row <= col`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.vals)
            .map(|((&r, &c), &v)| (r, c, v))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (r, c) = if row <= col { (row, col) } else { (col, row) };
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.csr_cols[lo..hi].binary_search(&c) {
            Ok(p) => self.csr_vals[lo + p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `max |M_ij - M_ji|` over the expanded matrix.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.csr_cols[p];
                worst = worst.max((self.csr_vals[p] - self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut d = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.upper_entries() {
            d[(r, c)] = v;
            d[(c, r)] = v;
        }
        d
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                self.csr_vals[self.row_ptr[r]..self.row_ptr[r + 1]]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

impl SymmetricOperator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |r: usize| {
            let mut acc = 0.0;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.csr_vals[p] * x[self.csr_cols[p]];
            }
            acc
        };
        // rows are independent, so the parallel product is bitwise identical
        if self.csr_vals.len() >= PARALLEL_NNZ {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(r, yr)| *yr = row(r));
        } else {
            y.iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        }
    }
}

impl SymmetricOperator for nalgebra::DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            *yi = (0..n).map(|j| self[(i, j)] * x[j]).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_mirror_and_merge() {
        let m =
            SparseSymmetric::from_triplets(3, [(0, 1, 2.0), (1, 0, 1.0), (2, 2, 5.0), (1, 1, 0.0)])
                .unwrap();
        assert_eq!(m.nnz_upper(), 2);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.asymmetry(), 0.0);
        let mut y = [0.0; 3];
        m.apply(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, [3.0, 3.0, 5.0]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SparseSymmetric::from_triplets(2, [(0, 2, 1.0)]).is_err());
        assert!(SparseSymmetric::from_triplets(2, [(0, 1, f64::NAN)]).is_err());
    }
}
