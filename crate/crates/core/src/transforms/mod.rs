//! Coordinate changes between the Grushin and divergence forms, Kelvin
//! inversion, and moving-sphere checks.

pub mod divform;
pub mod kelvin;

pub use divform::{
    divform_residual, divform_residual_fn, eta_of_x2, extended_profile, liouville_profile,
    pullback_full, pullback_to_divform, weighted_normal_flux, x2_of_eta, DivFormParams,
};
pub use kelvin::{
    exterior_plane_samples, kelvin_lift, kelvin_point, moving_sphere_check, KelvinParams, Violation,
};
