//! Radial eigenfunctions of the isotropic Aharonov-Bohm oscillator.
//!
//! `R_{n,ν}(r) = sqrt(ω) t^{ν/2} e^{-t/2} ℓ_n^ν(t)` with `t = ω r²/2` and
//! `ℓ_n^ν` the generalized Laguerre polynomial normalized against `t^ν e^{-t}`.
//! These solve `-r^{-1}(r R')' + ν² R / r² + ω² r² R / 4 = ω(2n + ν + 1) R` and
//! are orthonormal under `∫ R R' r dr`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ABBasisIndex {
    pub n: usize,
    /// Even relative angular momentum.
    pub m: i64,
    /// `|m + α|`.
    pub nu: f64,
}

impl ABBasisIndex {
    pub fn new(n: usize, m: i64, alpha: f64) -> Result<Self> {
        if m % 2 != 0 {
            return invalid(format!("angular momentum {m} must be even"));
        }
        Ok(Self {
            n,
            m,
            nu: (m as f64 + alpha).abs(),
        })
    }

    /// Eigenvalue of the isotropic radial problem at basis scale `omega`.
    pub fn isotropic_level(&self, omega: f64) -> f64 {
        omega * (2.0 * self.n as f64 + self.nu + 1.0)
    }
}

/// Fill `out[k] = t^{ν/2} e^{-t/2} ℓ_k^ν(t)` for `k < out.len()`.
///
/// Entries are exactly zero when the leading factor underflows.
pub fn laguerre_functions(nu: f64, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let lead = if t == 0.0 {
        if nu == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (0.5 * nu * t.ln() - 0.5 * t - 0.5 * libm::lgamma(nu + 1.0)).exp()
    };
    if lead == 0.0 && t > 0.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    out[0] = lead;
    let mut prev = 0.0;
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - t) * out[k] - (kf * (kf + nu)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + nu)).sqrt();
        prev = out[k];
        out[k + 1] = next;
    }
}

/// Fill `out[k] = ℓ_k^ν(t)`, orthonormal against `t^ν e^{-t}` on the half line.
pub fn laguerre_polynomials(nu: f64, t: f64, out: &mut [f64]) {
    laguerre_scaled(nu, t, (-0.5 * libm::lgamma(nu + 1.0)).exp(), out);
}

/// Same recurrence as [`laguerre_polynomials`] started from `out[0] = start`.
pub(crate) fn laguerre_scaled(nu: f64, t: f64, start: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = start;
    let mut prev = 0.0;
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - t) * out[k] - (kf * (kf + nu)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + nu)).sqrt();
        prev = out[k];
        out[k + 1] = next;
    }
}

/// `R_{n,ν}(r)` at basis scale `omega`.
pub fn ab_radial_eval(idx: ABBasisIndex, omega: f64, r: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return invalid(format!("basis scale must be positive, got {omega}"));
    }
    if !(r >= 0.0) {
        return invalid(format!("radius must be non-negative, got {r}"));
    }
    let mut buf = vec![0.0; idx.n + 1];
    laguerre_functions(idx.nu, 0.5 * omega * r * r, &mut buf);
    Ok(omega.sqrt() * buf[idx.n])
}
