//! Exact and numeric computations around the Witten genus.
//!
//! * [`qmod`]: Eisenstein series, lattice sums and quasi-modular forms.
//! * [`dga`]: graded-commutative differential algebras with truncation.
//! * [`geom`]: splitting-principle curvature models and Pontryagin numbers.
//! * [`pfaff`]: Pfaffians, normalized mode blocks and regularized products.
//! * [`witten`]: the Witten class and genus, the weight-2 anomaly and its primitive.
//! * [`bvloc`]: fixed-point localization on the two-sphere.

pub mod bvloc;
pub mod dga;
pub mod geom;
pub mod pfaff;
pub mod qmod;
pub mod scalar;
pub mod witten;

pub use scalar::{ComplexFloat, GaussianPi, GaussianRational, PiScalar, Rational, Scalar};
