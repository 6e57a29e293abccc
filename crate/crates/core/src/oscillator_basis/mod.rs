//! Oscillator eigenfunctions and the quadrature rules used to integrate them.

pub mod hermite;
pub mod quadrature;
pub mod radial;

pub use hermite::{
    hermite_all, hermite_derivative, hermite_derivative_from, hermite_eval, oscillator_energy,
    uepsilon_derivative, uepsilon_eval, HermiteIndex,
};
pub use quadrature::{make_quadrature, QuadratureKind, QuadratureRule};
pub use radial::{ab_radial_eval, laguerre_functions, laguerre_polynomials, ABBasisIndex};
