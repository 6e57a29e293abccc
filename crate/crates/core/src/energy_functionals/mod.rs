//! Quadratic forms on explicit trial states: the 2D energy of the product
//! ansatz, the 1D energy, and Hardy quotients.

pub mod constants;
pub mod decoupling;
pub mod hardy_mc;

pub use constants::{
    c_alpha, c_alpha_exact, channel_bound_holds, many_anyon_hardy_constant,
    many_anyon_hardy_constant_exact, min_even_distance_sq, Rational,
};
pub use decoupling::{energy1d, energy2d_trial, EnergyBreakdown, Trial1D, TrialState2D};
pub use hardy_mc::{
    channel_quotient_exact, channel_quotient_quadrature, hardy_quotient_mc, shipped_trials,
    three_body_quotient_mc, HardyEstimate, HardyTrial,
};
