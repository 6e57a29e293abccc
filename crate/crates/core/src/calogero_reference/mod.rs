//! Two-particle Calogero model `Σ(-∂_j² + x_j²) + 2α²/(x_1 - x_2)²`, the limit
//! one would reach without the singular gauge transformation.
//!
//! In relative coordinates the pair operator is `2[-∂² + α²/r² + r²/4]`. With
//! the regular (Friedrichs) boundary class `r^{ν+1/2}`, `ν = sqrt(α² + 1/4)`,
//! it is `2 L_ν` on radial functions, so its levels are `2(2n + 1 + ν)`.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
pub use oracle::{radial_fd_levels, radial_fd_levels_on, RadialGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalogeroParams {
    pub alpha: f64,
}

impl CalogeroParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return invalid(format!(
                "statistics parameter must lie in (0, 2), got {alpha}"
            ));
        }
        Ok(Self { alpha })
    }

    /// Per-pair coupling `2α²`.
    pub fn coupling(&self) -> f64 {
        2.0 * self.alpha * self.alpha
    }

    pub fn nu(&self) -> f64 {
        (self.alpha * self.alpha + 0.25).sqrt()
    }

    /// `2(2n + 1 + ν)`
    pub fn relative_level(&self, n: usize) -> f64 {
        2.0 * (2.0 * n as f64 + 1.0 + self.nu())
    }
}

/// The `k` smallest levels, CM `2p + 1` plus relative `2(2n + 1 + ν)`.
pub fn calogero_n2_levels(p: CalogeroParams, k: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..k)
        .flat_map(|cm| (0..k).map(move |n| (2 * cm + 1) as f64 + p.relative_level(n)))
        .collect();
    out.sort_by(f64::total_cmp);
    out.truncate(k);
    out
}

/// Calogero ground minus the TG ground 4.
pub fn calogero_vs_tg_gap(alpha: f64) -> Result<f64> {
    let p = CalogeroParams::new(alpha)?;
    Ok(calogero_n2_levels(p, 1)[0] - 4.0)
}

/// Relative Calogero levels from the finite-difference oracle.
pub fn calogero_relative_oracle(p: CalogeroParams, k: usize, grid: RadialGrid) -> Result<Vec<f64>> {
    Ok(radial_fd_levels(p.nu(), k, grid)?
        .into_iter()
        .map(|e| 2.0 * e)
        .collect())
}
