//! Degenerate and singular Monge-Ampère equations `det D²u = (a+by)^α`
//! on the upper half-plane.
//!
//! The crate provides
//!
//! * the explicit convex solution families ([`closed_forms`]),
//! * a discrete partial Legendre transform in `x` and the Grushin-type
//!   equation it produces ([`legendre`]),
//! * the change of variables to `div(x₂^{a_w} ∇v) = 0`, Kelvin inversion
//!   and moving-sphere checks ([`transforms`]),
//! * a damped-Newton finite-difference solver ([`solver`]) and grid
//!   refinement studies ([`convergence`]),
//! * the command-line driver ([`cli`]).
//!
//! Grids are uniform rectangles ([`GridSpec`]) and sampled functions are
//! [`ScalarField`]s stored row-major with `y` as the outer index.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_forms;
pub mod convergence;
mod error;
pub mod format;
pub mod grid;
pub mod interp;
pub mod legendre;
pub mod params;
pub mod residual;
pub mod solver;
pub mod transforms;

pub use closed_forms::{sharpness_lower_bound, Branch, DirichletFamily, EntireFamily, Hessian2, NeumannFamily};
pub use error::{Error, Result};
pub use grid::{GridSpec, ScalarField};
pub use legendre::{grushin_residual, plt_forward, plt_inverse, second_diff_in_xi, PltResult};
pub use params::{EquationParams, FamilyCoeffs};
pub use residual::{fd_hessian, ma_residual, DiscreteHessian, ResidualReport};
pub use solver::{convexity_audit, solve_dirichlet, InitKind, SolveReport, SolverConfig};
