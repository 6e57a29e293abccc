//! Exact one-dimensional limit model: the Tonks-Girardeau gas in a harmonic
//! trap, solved by Bose-Fermi mapping.
//!
//! An eigenstate is labelled by a set of distinct oscillator orbitals. Its
//! energy is the sum of the orbital levels and its wavefunction is the
//! sign-dressed Slater determinant
//! `(N!)^{-1/2} ∏_{i<j} sgn(x_j - x_i) det[h_{o_a}(x_b)]`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::oscillator_basis::{
    hermite_all, hermite_derivative_from, make_quadrature, QuadratureKind,
};
use crate::scalar::Scalar;

/// Largest particle count accepted by the level enumeration.
pub const MAX_PARTICLES: usize = 12;
/// Largest number of levels a single enumeration may return.
pub const MAX_LEVELS: usize = 1_000_000;

/// Strictly increasing list of occupied oscillator orbitals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrbitalSet(Vec<usize>);

impl OrbitalSet {
    pub fn new(orbitals: Vec<usize>) -> Result<Self> {
        if orbitals.is_empty() {
            return invalid("orbital set must be non-empty");
        }
        if orbitals.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("orbitals {orbitals:?} must be strictly increasing"));
        }
        Ok(Self(orbitals))
    }

    /// Orbitals `0..n`, the ground configuration.
    pub fn ground(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn orbitals(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn energy(&self) -> u64 {
        self.0.iter().map(|&o| 2 * o as u64 + 1).sum()
    }

    pub fn max_orbital(&self) -> usize {
        *self.0.last().expect("non-empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TGEigenstate {
    pub orbitals: OrbitalSet,
    pub energy: u64,
}

impl TGEigenstate {
    pub fn new(orbitals: OrbitalSet) -> Self {
        let energy = orbitals.energy();
        Self { orbitals, energy }
    }

    pub fn ground(n: usize) -> Self {
        Self::new(OrbitalSet::ground(n))
    }

    pub fn particles(&self) -> usize {
        self.orbitals.len()
    }
}

/// The `k` lowest levels of `n` hard-core bosons, counted with multiplicity.
///
/// Best-first search over single-orbital promotions; ties are broken by the
/// lexicographic order of the orbital sets.
pub fn tg_levels(n: usize, k: usize) -> Result<Vec<TGEigenstate>> {
    if n == 0 || n > MAX_PARTICLES {
        return invalid(format!("particle count {n} outside 1..={MAX_PARTICLES}"));
    }
    if k == 0 {
        return invalid("number of levels must be at least 1");
    }
    if k > MAX_LEVELS {
        return Err(Error::Resource(format!(
            "{k} levels exceed the enumeration cap {MAX_LEVELS}"
        )));
    }
    let ground = OrbitalSet::ground(n);
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    seen.insert(ground.clone());
    heap.push(Reverse((ground.energy(), ground)));

    let mut out = Vec::with_capacity(k);
    while let Some(Reverse((_, set))) = heap.pop() {
        let orb = set.orbitals();
        for j in 0..orb.len() {
            let bumped = orb[j] + 1;
            if j + 1 < orb.len() && bumped == orb[j + 1] {
                continue;
            }
            let mut next = orb.to_vec();
            next[j] = bumped;
            let next = OrbitalSet(next);
            if seen.insert(next.clone()) {
                heap.push(Reverse((next.energy(), next)));
            }
        }
        out.push(TGEigenstate::new(set));
        if out.len() == k {
            break;
        }
    }
    Ok(out)
}

/// Determinant by LU with partial pivoting; `a` is row-major `n × n` and is overwritten.
pub fn determinant<T: Scalar>(a: &mut [T], n: usize) -> T {
    let mut det = T::one();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[piv * n + col].abs() {
                piv = row;
            }
        }
        if a[piv * n + col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != T::zero() {
                for c in col + 1..n {
                    let v = a[col * n + c];
                    a[row * n + c] = a[row * n + c] - f * v;
                }
            }
        }
    }
    det
}

/// `∏_{i<j} sgn(x_j - x_i)`, zero on coincidences.
pub fn ordering_sign<T: Scalar>(xs: &[T]) -> T {
    let mut s = T::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = xs[j] - xs[i];
            if d == T::zero() {
                return T::zero();
            }
            if d < T::zero() {
                s = -s;
            }
        }
    }
    s
}

fn normalization<T: Scalar>(n: usize) -> T {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    T::lit(fact.powf(-0.5))
}

fn orbital_tables<T: Scalar>(state: &TGEigenstate, xs: &[T]) -> Vec<Vec<T>> {
    let top = state.orbitals.max_orbital() + 2;
    xs.iter()
        .map(|&x| {
            let mut t = vec![T::zero(); top];
            hermite_all(x, &mut t);
            t
        })
        .collect()
}

fn check_arity<T>(state: &TGEigenstate, xs: &[T]) -> Result<()> {
    if xs.len() != state.particles() {
        return invalid(format!(
            "expected {} coordinates, got {}",
            state.particles(),
            xs.len()
        ));
    }
    Ok(())
}

/// Slater determinant `det[h_{o_a}(x_b)]` without sign dressing or normalization.
pub fn slater_determinant<T: Scalar>(state: &TGEigenstate, xs: &[T]) -> Result<T> {
    check_arity(state, xs)?;
    let tabs = orbital_tables(state, xs);
    Ok(slater_from_tables(state, &tabs, None))
}

fn slater_from_tables<T: Scalar>(
    state: &TGEigenstate,
    tabs: &[Vec<T>],
    derivative_column: Option<usize>,
) -> T {
    let n = state.particles();
    let orb = state.orbitals.orbitals();
    let mut m = vec![T::zero(); n * n];
    for a in 0..n {
        for b in 0..n {
            m[a * n + b] = if derivative_column == Some(b) {
                hermite_derivative_from(&tabs[b], orb[a])
            } else {
                tabs[b][orb[a]]
            };
        }
    }
    determinant(&mut m, n)
}

/// Mapped eigenfunction value; exactly zero whenever two coordinates coincide.
pub fn tg_eigenfunction_eval<T: Scalar>(state: &TGEigenstate, xs: &[T]) -> Result<T> {
    check_arity(state, xs)?;
    let sign = ordering_sign(xs);
    if sign == T::zero() {
        return Ok(T::zero());
    }
    let tabs = orbital_tables(state, xs);
    Ok(normalization::<T>(state.particles()) * sign * slater_from_tables(state, &tabs, None))
}

/// Value and gradient off the coincidence set, from analytic differentiation
/// of the Slater determinant.
pub fn tg_value_and_gradient<T: Scalar>(state: &TGEigenstate, xs: &[T]) -> Result<(T, Vec<T>)> {
    check_arity(state, xs)?;
    let n = state.particles();
    let sign = ordering_sign(xs);
    let c = normalization::<T>(n) * sign;
    let tabs = orbital_tables(state, xs);
    let value = c * slater_from_tables(state, &tabs, None);
    let grad = (0..n)
        .map(|j| c * slater_from_tables(state, &tabs, Some(j)))
        .collect();
    Ok((value, grad))
}

fn tensor_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = make_quadrature(QuadratureKind::GaussHermite, order)?;
    Ok((rule.nodes, rule.plain_weights))
}

/// Visit every point of the `n`-fold tensor grid.
fn for_each_tensor_point(nodes: &[f64], weights: &[f64], n: usize, mut f: impl FnMut(&[f64], f64)) {
    let q = nodes.len();
    let mut idx = vec![0usize; n];
    let mut xs = vec![0.0; n];
    loop {
        let mut w = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            xs[d] = nodes[i];
            w *= weights[i];
        }
        f(&xs, w);
        let mut d = 0;
        loop {
            if d == n {
                return;
            }
            idx[d] += 1;
            if idx[d] < q {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Largest particle count for the tensor-product quadratures.
pub const MAX_QUADRATURE_PARTICLES: usize = 3;

/// `Σ_j ∫ (|∂_j ψ|² + x_j² |ψ|²)` by tensor Gauss-Hermite quadrature.
///
/// The sign factor squares to one, so the integrand is a polynomial times a
/// Gaussian and the rule is exact once `order` exceeds the polynomial degree.
pub fn tg_energy_quadrature(state: &TGEigenstate, order: usize) -> Result<f64> {
    let n = state.particles();
    if n > MAX_QUADRATURE_PARTICLES {
        return Err(Error::Resource(format!(
            "tensor quadrature limited to {MAX_QUADRATURE_PARTICLES} particles, got {n}"
        )));
    }
    let (nodes, weights) = tensor_rule(order)?;
    let c2 = normalization::<f64>(n).powi(2);
    let mut energy = 0.0;
    let order_hint = state.orbitals.max_orbital() + 2;
    for_each_tensor_point(&nodes, &weights, n, |xs, w| {
        let tabs: Vec<Vec<f64>> = xs
            .iter()
            .map(|&x| {
                let mut t = vec![0.0; order_hint];
                hermite_all(x, &mut t);
                t
            })
            .collect();
        let det = slater_from_tables(state, &tabs, None);
        let mut acc = 0.0;
        for (j, &x) in xs.iter().enumerate() {
            let d = slater_from_tables(state, &tabs, Some(j));
            acc += d * d + x * x * det * det;
        }
        energy += w * acc;
    });
    Ok(c2 * energy)
}

/// `⟨ψ_a, ψ_b⟩` by tensor Gauss-Hermite quadrature.
pub fn tg_overlap_quadrature(a: &TGEigenstate, b: &TGEigenstate, order: usize) -> Result<f64> {
    let n = a.particles();
    if b.particles() != n {
        return invalid("states must have equal particle counts");
    }
    if n > MAX_QUADRATURE_PARTICLES {
        return Err(Error::Resource(format!(
            "tensor quadrature limited to {MAX_QUADRATURE_PARTICLES} particles"
        )));
    }
    let (nodes, weights) = tensor_rule(order)?;
    let mut acc = 0.0;
    for_each_tensor_point(&nodes, &weights, n, |xs, w| {
        // sgn² = 1 away from the measure-zero diagonals
        let da = slater_determinant(a, xs).expect("arity checked");
        let db = slater_determinant(b, xs).expect("arity checked");
        acc += w * da * db;
    });
    Ok(normalization::<f64>(n).powi(2) * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator_basis::{hermite_eval, HermiteIndex};

    fn energies(n: usize, k: usize) -> Vec<u64> {
        tg_levels(n, k)
            .unwrap()
            .into_iter()
            .map(|s| s.energy)
            .collect()
    }

    #[test]
    fn level_examples() {
        assert_eq!(energies(2, 6), vec![4, 6, 8, 8, 10, 10]);
        assert_eq!(energies(3, 1), vec![9]);
        assert_eq!(energies(1, 3), vec![1, 3, 5]);
    }

    #[test]
    fn ground_energy_is_n_squared() {
        for n in 1..=MAX_PARTICLES {
            assert_eq!(energies(n, 1)[0], (n * n) as u64);
        }
    }

    #[test]
    fn degenerate_levels_are_lexicographic() {
        let levels = tg_levels(2, 6).unwrap();
        assert_eq!(levels[2].orbitals.orbitals(), &[0, 3]);
        assert_eq!(levels[3].orbitals.orbitals(), &[1, 2]);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(tg_levels(0, 1).is_err());
        assert!(tg_levels(13, 1).is_err());
        assert!(tg_levels(2, 0).is_err());
        assert!(matches!(
            tg_levels(2, MAX_LEVELS + 1),
            Err(Error::Resource(_))
        ));
        assert!(OrbitalSet::new(vec![1, 1]).is_err());
        assert!(OrbitalSet::new(vec![2, 1]).is_err());
    }

    /// Brute force: all sets with orbitals ≤ `cap`, sorted by (energy, set).
    fn exhaustive(n: usize, cap: usize) -> Vec<(u64, Vec<usize>)> {
        fn rec(
            start: usize,
            cap: usize,
            left: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<(u64, Vec<usize>)>,
        ) {
            if left == 0 {
                out.push((cur.iter().map(|&o| 2 * o as u64 + 1).sum(), cur.clone()));
                return;
            }
            for o in start..=cap {
                cur.push(o);
                rec(o + 1, cap, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, cap, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        for n in 1..=4 {
            let brute = exhaustive(n, 25);
            let got = tg_levels(n, 50).unwrap();
            for (g, b) in got.iter().zip(&brute) {
                assert_eq!(g.energy, b.0);
                assert_eq!(g.orbitals.orbitals(), b.1.as_slice());
            }
            assert!(got.windows(2).all(|w| w[0].energy <= w[1].energy));
        }
    }

    #[test]
    fn n2_ground_closed_form() {
        let g = TGEigenstate::ground(2);
        let v = tg_eigenfunction_eval(&g, &[1.0, -1.0]).unwrap();
        let want = 2.0 / std::f64::consts::PI.sqrt() * (-1.0f64).exp();
        assert!((v - want).abs() < 1e-14);
        assert!((want - 0.41511).abs() < 1e-5);
        assert_eq!(tg_eigenfunction_eval(&g, &[-1.0, 1.0]).unwrap(), v);
        for x in [-2.0, 0.0, 0.3, 5.0] {
            assert_eq!(tg_eigenfunction_eval(&g, &[x, x]).unwrap(), 0.0);
        }
    }

    /// 3×3 determinant by cofactors.
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[test]
    fn lu_matches_closed_form_for_three_particles() {
        let st = TGEigenstate::new(OrbitalSet::new(vec![0, 2, 3]).unwrap());
        let xs = [0.4, -1.1, 0.9];
        let mut m = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] = hermite_eval(HermiteIndex(st.orbitals.orbitals()[a]), xs[b]);
            }
        }
        let closed = det3(m);
        assert!((slater_determinant(&st, &xs).unwrap() - closed).abs() < 1e-14);
    }

    #[test]
    fn symmetric_under_permutations() {
        let st = TGEigenstate::new(OrbitalSet::new(vec![0, 1, 4]).unwrap());
        let xs = [0.3f64, -0.7, 1.2];
        let v = tg_eigenfunction_eval(&st, &xs).unwrap();
        for p in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
            let ys = [xs[p[0]], xs[p[1]], xs[p[2]]];
            assert!((tg_eigenfunction_eval(&st, &ys).unwrap() - v).abs() < 1e-14);
        }
    }

    #[test]
    fn energy_by_quadrature() {
        let e = tg_energy_quadrature(&TGEigenstate::ground(2), 48).unwrap();
        assert!((e - 4.0).abs() < 1e-8, "{e}");
        let single = TGEigenstate::new(OrbitalSet::new(vec![1]).unwrap());
        assert!((tg_energy_quadrature(&single, 16).unwrap() - 3.0).abs() < 1e-10);
        let e3 = tg_energy_quadrature(&TGEigenstate::ground(3), 32).unwrap();
        assert!((e3 - 9.0).abs() < 1e-6, "{e3}");
        assert!(matches!(
            tg_energy_quadrature(&TGEigenstate::ground(4), 8),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn low_states_are_orthonormal() {
        for n in 1..=3 {
            let states = tg_levels(n, 4).unwrap();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let o = tg_overlap_quadrature(a, b, 24).unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((o - want).abs() < 1e-8, "n {n} ({i},{j}): {o}");
                }
            }
        }
    }

    #[test]
    fn pair_factor_extends_across_diagonal() {
        // ψ / (|x1 - x2| e^{-(x1²+x2²)/2}) is a polynomial; approach x1 = x2 from both sides.
        let st = TGEigenstate::new(OrbitalSet::new(vec![0, 3]).unwrap());
        let ratio = |x1: f64, x2: f64| {
            tg_eigenfunction_eval(&st, &[x1, x2]).unwrap()
                / ((x1 - x2).abs() * (-(x1 * x1 + x2 * x2) / 2.0).exp())
        };
        let x = 0.6;
        let above = ratio(x + 1e-6, x);
        let below = ratio(x - 1e-6, x);
        assert!((above - below).abs() < 1e-5 * above.abs().max(1.0));
        let farther = ratio(x + 1e-3, x);
        assert!((farther - above).abs() < 1e-2 * above.abs().max(1.0));
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let st = TGEigenstate::new(OrbitalSet::new(vec![1, 2]).unwrap());
        let xs = [0.5f64, -0.4];
        let (_, g) = tg_value_and_gradient(&st, &xs).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let mut p = xs;
            let mut m = xs;
            p[j] += h;
            m[j] -= h;
            let fd = (tg_eigenfunction_eval(&st, &p).unwrap()
                - tg_eigenfunction_eval(&st, &m).unwrap())
                / (2.0 * h);
            assert!((fd - g[j]).abs() < 1e-8);
        }
    }
}
