//! Eisenstein series: exact q-expansions, numeric lattice sums, the
//! `SL_2(Z)` transformation law and quasi-modular decomposition.

mod decompose;
mod gamma;
mod lattice;
mod series;

use thiserror::Error;

pub use decompose::{monomials_of_weight, quasi_modular_decompose, QuasiModularPolynomial, QuasiMonomial};
pub use gamma::{transform_residual, GammaElement};
pub use lattice::{
    check_upper_half_plane, eisenstein_lattice, is_in_z2_plus, lattice_power_sum, z2_plus, LatticeOrdering,
    OrderingKind,
};
pub use series::{
    bernoulli, bernoulli_numbers, divisor_sigma, eisenstein_hat, eisenstein_q, factorial, hat_factor,
    parse_rational, two_zeta_even, QSeries, SeriesRecord, EXACT_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QmodError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: i32, right: i32 },
    #[error("no quasi-modular decomposition: {0}")]
    NoDecomposition(String),
    #[error("need at least {needed} coefficients, series has {available}")]
    InsufficientOrder { needed: i64, available: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}
