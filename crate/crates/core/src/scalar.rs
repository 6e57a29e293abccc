//! Scalar abstraction for the closed-form parts of the crate.
//!
//! Basis functions, gauge objects and the Hardy constants are written against
//! [`Scalar`] so they can be evaluated in `f32` or `f64`. The eigensolver and
//! the quadrature-heavy experiments are `f64` only.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lift an `f64` literal. Panics only for non-representable values, which
    /// cannot happen for the finite constants used in this crate.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
