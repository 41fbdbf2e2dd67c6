use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::problem::EquivariantSurfaceProblem;
use super::BvlocError;
use crate::scalar::rational;

/// Default bound on `max |alpha0' + s g|` before localizing.
pub const CLOSEDNESS_TOLERANCE: f64 = 1e-9;

/// The fixed point at the pole `z = +-1` contributes `alpha0(p) / e(p)`
/// with `e(+-1) = +-s * FIXED_POINT_CONSTANT`. The value was obtained by
/// [`calibrate`] on [`calibration_problem`] and is frozen here.
pub const FIXED_POINT_CONSTANT: f64 = -1.0 / (2.0 * PI);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub closedness: f64,
}

fn rule(grid: usize) -> Result<GaussLegendre, BvlocError> {
    let n = NonZeroUsize::new(grid).ok_or(BvlocError::InvalidGrid)?;
    Ok(GaussLegendre::new(n))
}

/// `max |alpha0'(z) + s g(z)|` over the quadrature nodes and both poles.
pub fn q_closedness_residual(p: &EquivariantSurfaceProblem) -> Result<f64, BvlocError> {
    let quad = rule(p.grid)?;
    let s = p.speed();
    let defect = |z: f64| (p.zero_form_derivative(z) + s * p.top_form(z)).abs();
    Ok(quad
        .as_node_weight_pairs()
        .iter()
        .map(|(z, _)| *z)
        .chain([-1.0, 1.0])
        .map(defect)
        .fold(0.0, f64::max))
}

/// Integral of the top-degree part: Gauss-Legendre in `z`, trapezoid in
/// `phi`, summed row by row in a fixed order.
fn integrate_top(p: &EquivariantSurfaceProblem, quad: &GaussLegendre) -> f64 {
    let n_phi = p.grid;
    let dphi = 2.0 * PI / n_phi as f64;
    let rows: Vec<f64> = quad
        .as_node_weight_pairs()
        .par_iter()
        .map(|&(z, w)| {
            // the integrand is phi-independent; the rule still visits every phi node
            let value = p.top_form(z);
            let mut row = 0.0;
            for _ in 0..n_phi {
                row += value * dphi;
            }
            w * row
        })
        .collect();
    rows.iter().sum()
}

fn fixed_point_sum(p: &EquivariantSurfaceProblem, constant: f64) -> f64 {
    let e = p.speed() * constant;
    p.zero_form(1.0) / e - p.zero_form(-1.0) / e
}

pub fn bv_localize(p: &EquivariantSurfaceProblem) -> Result<LocalizationReport, BvlocError> {
    bv_localize_with(p, CLOSEDNESS_TOLERANCE)
}

pub fn bv_localize_with(p: &EquivariantSurfaceProblem, tolerance: f64) -> Result<LocalizationReport, BvlocError> {
    if p.s.is_zero() {
        return Err(BvlocError::FixedPointDegenerate);
    }
    let quad = rule(p.grid)?;
    let closedness = q_closedness_residual(p)?;
    if closedness > tolerance {
        return Err(BvlocError::NotClosed {
            residual: closedness,
            tolerance,
        });
    }
    let lhs = integrate_top(p, &quad);
    let rhs = fixed_point_sum(p, FIXED_POINT_CONSTANT);
    Ok(LocalizationReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        closedness,
    })
}

/// `alpha0 = z`, `g = -1`, `s = 1`.
pub fn calibration_problem(grid: usize) -> EquivariantSurfaceProblem {
    EquivariantSurfaceProblem::new("z", "-1", rational(1, 1), grid).expect("fixed calibration input")
}

/// The fixed-point constant that makes the two sides agree on the
/// calibration problem, measured with the quadrature at `grid`.
pub fn calibrate(grid: usize) -> Result<f64, BvlocError> {
    let p = calibration_problem(grid);
    let lhs = integrate_top(&p, &rule(grid)?);
    let with_unit = fixed_point_sum(&p, 1.0);
    Ok(with_unit / lhs)
}
