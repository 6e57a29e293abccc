pub mod anyon2d;
pub mod calogero_reference;
pub mod cli_io;
pub mod energy_functionals;
pub mod error;
pub mod experiments;
pub mod gauge_geometry;
pub mod oscillator_basis;
pub mod scalar;
pub mod tonks_girardeau;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Real = f64;
