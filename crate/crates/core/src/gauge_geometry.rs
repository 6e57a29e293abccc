//! Aharonov-Bohm gauge objects of the magnetic-gauge anyon picture.
//!
//! Everything here is α-free geometry: the statistics parameter only enters
//! downstream as a multiplier of `A_j` and `S`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Minimum separation in `x` accepted by the phase `S` and its gradient.
pub const DIAGONAL_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// `(-y, x)`
    pub fn perp(self) -> Self {
        Self {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn norm_sq(self) -> T {
        self.x * self.x + self.y * self.y
    }

    pub fn scale(self, s: T) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
        }
    }
}

impl<T: Scalar> std::ops::Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }
}

impl<T: Scalar> std::ops::Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration2D<T> {
    pub points: Vec<Point2<T>>,
}

impl<T: Scalar> Configuration2D<T> {
    pub fn new(points: Vec<Point2<T>>) -> Self {
        Self { points }
    }

    /// Build from `[(x_1, y_1), (x_2, y_2), ...]`.
    pub fn from_pairs(pairs: &[(T, T)]) -> Self {
        Self {
            points: pairs.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fails if two particles coincide.
    pub fn check_distinct(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            for (j, q) in self.points.iter().enumerate().skip(i + 1) {
                if (*p - *q).norm_sq() == T::zero() {
                    return Err(Error::Singular(format!("particles {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Fails if two particles share an `x` coordinate (up to [`DIAGONAL_GUARD`]).
    pub fn check_off_x_diagonals(&self) -> Result<()> {
        let guard = T::lit(DIAGONAL_GUARD);
        for (i, p) in self.points.iter().enumerate() {
            for (j, q) in self.points.iter().enumerate().skip(i + 1) {
                if (p.x - q.x).abs() < guard {
                    return Err(Error::Singular(format!(
                        "particles {i} and {j} lie on an x-diagonal"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `A_j = Σ_{k≠j} (x_j - x_k)^⊥ / |x_j - x_k|²`.
pub fn vector_potential<T: Scalar>(j: usize, cfg: &Configuration2D<T>) -> Result<Point2<T>> {
    if j >= cfg.len() {
        return invalid(format!(
            "particle index {j} out of range for {} particles",
            cfg.len()
        ));
    }
    let xj = cfg.points[j];
    let mut acc = Point2::new(T::zero(), T::zero());
    for (k, &xk) in cfg.points.iter().enumerate() {
        if k == j {
            continue;
        }
        let d = xj - xk;
        let d2 = d.norm_sq();
        if d2 == T::zero() {
            return Err(Error::Singular(format!("particles {j} and {k} coincide")));
        }
        acc = acc + d.perp().scale(T::one() / d2);
    }
    Ok(acc)
}

/// All `A_j` at once.
pub fn vector_potentials<T: Scalar>(cfg: &Configuration2D<T>) -> Result<Vec<Point2<T>>> {
    (0..cfg.len()).map(|j| vector_potential(j, cfg)).collect()
}

/// `S = Σ_{j<l} arctan((y_j - y_l) / (x_j - x_l))`, principal branch.
///
/// `S` jumps by `π` across every `x`-diagonal; configurations within
/// [`DIAGONAL_GUARD`] of one are rejected.
pub fn phase_s<T: Scalar>(cfg: &Configuration2D<T>) -> Result<T> {
    cfg.check_off_x_diagonals()?;
    let mut s = T::zero();
    for (j, p) in cfg.points.iter().enumerate() {
        for q in cfg.points.iter().skip(j + 1) {
            s = s + ((p.y - q.y) / (p.x - q.x)).atan();
        }
    }
    Ok(s)
}

/// `∇_{x_j} S` by differentiating each arctangent term.
pub fn grad_s<T: Scalar>(cfg: &Configuration2D<T>) -> Result<Vec<Point2<T>>> {
    cfg.check_off_x_diagonals()?;
    let mut grad = vec![Point2::new(T::zero(), T::zero()); cfg.len()];
    for (j, p) in cfg.points.iter().enumerate() {
        for (l, q) in cfg.points.iter().enumerate().skip(j + 1) {
            let dx = p.x - q.x;
            let dy = p.y - q.y;
            let slope = dy / dx;
            let damp = T::one() / (T::one() + slope * slope);
            // d/d(dx) atan(dy/dx) = -dy/dx² · damp,  d/d(dy) = damp / dx
            let g = Point2::new(-slope / dx * damp, damp / dx);
            grad[j] = grad[j] + g;
            grad[l] = grad[l] - g;
        }
    }
    Ok(grad)
}

/// Center-of-mass / relative coordinates of a particle pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CMRelativeFrame<T> {
    /// `(x_1 + x_2) / 2`
    pub center: Point2<T>,
    /// `x_1 - x_2`
    pub relative: Point2<T>,
}

pub fn cm_relative_split<T: Scalar>(cfg: &Configuration2D<T>) -> Result<CMRelativeFrame<T>> {
    if cfg.len() != 2 {
        return invalid(format!(
            "center-of-mass split needs 2 particles, got {}",
            cfg.len()
        ));
    }
    let (a, b) = (cfg.points[0], cfg.points[1]);
    Ok(CMRelativeFrame {
        center: (a + b).scale(T::lit(0.5)),
        relative: a - b,
    })
}

pub fn cm_relative_merge<T: Scalar>(frame: &CMRelativeFrame<T>) -> Configuration2D<T> {
    let half = frame.relative.scale(T::lit(0.5));
    Configuration2D::new(vec![frame.center + half, frame.center - half])
}
