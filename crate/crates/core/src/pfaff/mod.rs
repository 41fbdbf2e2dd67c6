//! Pfaffians over the algebra, normalized mode blocks, the regularized
//! product over the half lattice and the circle-mode product for the
//! `A-hat` class.

mod ahat;
mod blocks;
mod pfaffian;
mod product;

pub use ahat::{a_hat_limit, a_hat_mode_factor, a_hat_product, zeta_even};
pub use blocks::{block_norm_determinant, block_norm_pfaffian, block_skew_matrix, BlockExpansion, BlockIndex, SymbolExpansion};
pub use pfaffian::{pfaffian, SkewMatrix};
pub use product::{
    block_indices, lattice_exponential, measure_ordering_shift, partial_power_sums, regularized_product, OrderingShift,
    OrderingShiftRow,
};

use thiserror::Error;

use crate::dga::DgaError;
use crate::geom::GeomError;
use crate::qmod::QmodError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfaffError {
    #[error("Pfaffian of an odd-size ({0}) matrix")]
    OddSize(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix has odd entries")]
    NotEven,
    #[error("({n}, {m}) is not in the half lattice")]
    InvalidIndex { n: i64, m: i64 },
    #[error("mode eigenvalue vanishes")]
    DivisionByZero,
    #[error("bound must be at least 1")]
    InvalidBound,
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Qmod(#[from] QmodError),
}

#[cfg(test)]
mod tests;
