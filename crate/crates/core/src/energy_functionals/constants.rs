//! Hardy constants, in floating point and in exact rational arithmetic.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// `C_α = 2 min_{q∈ℤ} |α - 2q|²` for `α ∈ (0, 2)`.
pub fn c_alpha<T: Scalar>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return invalid(format!(
            "statistics parameter must lie in (0, 2), got {alpha}"
        ));
    }
    let d = alpha.min(T::lit(2.0) - alpha);
    Ok(T::lit(2.0) * d * d)
}

/// `2 C_α / ((N - 1)(2 + 3(N - 2) C_α))`.
pub fn many_anyon_hardy_constant<T: Scalar>(n: usize, alpha: T) -> Result<T> {
    if n < 2 {
        return invalid(format!("need at least two particles, got {n}"));
    }
    let c = c_alpha(alpha)?;
    let nm1 = T::from_usize_lossy(n - 1);
    let nm2 = T::from_usize_lossy(n - 2);
    Ok(T::lit(2.0) * c / (nm1 * (T::lit(2.0) + T::lit(3.0) * nm2 * c)))
}

pub type Rational = Ratio<i64>;

/// `min_{q∈ℤ} (α - 2q)²` by scanning the integers around `α / 2`.
pub fn min_even_distance_sq(alpha: Rational) -> Rational {
    let center = (alpha / Rational::from_integer(2)).floor().to_integer();
    (center - 2..=center + 2)
        .map(|q| {
            let d = alpha - Rational::from_integer(2 * q);
            d * d
        })
        .min()
        .expect("non-empty range")
}

pub fn c_alpha_exact(alpha: Rational) -> Result<Rational> {
    let two = Rational::from_integer(2);
    if !(alpha > Rational::zero() && alpha < two) {
        return invalid(format!(
            "statistics parameter must lie in (0, 2), got {alpha}"
        ));
    }
    Ok(two * min_even_distance_sq(alpha))
}

pub fn many_anyon_hardy_constant_exact(n: usize, alpha: Rational) -> Result<Rational> {
    if n < 2 {
        return invalid(format!("need at least two particles, got {n}"));
    }
    let c = c_alpha_exact(alpha)?;
    let two = Rational::from_integer(2);
    let nm1 = Rational::from_integer(n as i64 - 1);
    let nm2 = Rational::from_integer(n as i64 - 2);
    Ok(two * c / (nm1 * (two + Rational::from_integer(3) * nm2 * c)))
}

/// `(m + α)² >= min_q (α - 2q)²` for even `m`, checked exactly.
pub fn channel_bound_holds(m: i64, alpha: Rational) -> bool {
    debug_assert!(m % 2 == 0);
    let s = Rational::from_integer(m) + alpha;
    s * s >= min_even_distance_sq(alpha)
}
