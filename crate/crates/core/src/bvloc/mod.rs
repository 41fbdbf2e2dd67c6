//! Equivariant localization on the round sphere with a rotation action.
//!
//! The sphere is parameterized by height `z` in `[-1, 1]` and angle `phi`;
//! the action is `xi = s d/dphi` with fixed points at the poles. An
//! equivariant form is `alpha0(z) + g(z) dz ^ dphi`, closed under
//! `Q = d - i_xi` exactly when `alpha0' + s g = 0`.

mod problem;
mod quadrature;

pub use problem::{EquivariantSurfaceProblem, ZPolynomial};
pub use quadrature::{
    bv_localize, bv_localize_with, calibrate, calibration_problem, q_closedness_residual, LocalizationReport, CLOSEDNESS_TOLERANCE,
    FIXED_POINT_CONSTANT,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BvlocError {
    #[error("rotation speed is zero, so every point is fixed")]
    FixedPointDegenerate,
    #[error("form is not Q-closed: residual {residual:e} exceeds {tolerance:e}")]
    NotClosed { residual: f64, tolerance: f64 },
    #[error("grid must be positive")]
    InvalidGrid,
    #[error("cannot parse problem: {0}")]
    Parse(String),
}

#[cfg(test)]
mod tests;
