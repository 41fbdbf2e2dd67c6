//! Truncated graded-commutative differential algebras.
//!
//! An [`Algebra`] is a finite list of named generators with form degrees,
//! optional invertibility (for the Bott symbol and the automorphy symbol)
//! and a differential given on generators. [`DgaElement`] is generic over
//! the coefficient [`Scalar`](crate::Scalar), so mixing scalar modes is a
//! type error; mixing algebras is reported at runtime.

mod algebra;
mod dense;
mod element;
mod matrix;
mod text;

pub use algebra::{Algebra, AlgebraBuilder, Generator, Monomial};
pub use dense::DenseBasis;
pub use element::DgaElement;
pub use matrix::DgaMatrix;
pub use text::parse_element;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgaError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("negative exponent on non-invertible generator {0}")]
    NegativeExponent(String),
    #[error("odd generator {0} appears with exponent above 1")]
    OddSquare(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("d({generator}) must have degree {expected}, found a term of degree {found}")]
    DegreeMismatch { generator: String, expected: u32, found: u32 },
    #[error("d(d({0})) is not zero")]
    DSquaredNonzero(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("term {0} is not divisible by the divisor")]
    NotDivisible(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("exp needs an element without a form-degree-0 part")]
    NotNilpotent,
    #[error("exp and log need even elements")]
    OddExponent,
    #[error("log needs an element of the form 1 + (positive degree)")]
    NotUnital,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[cfg(test)]
mod tests;
