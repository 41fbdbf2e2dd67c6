//! Splitting-principle curvature models, symmetric-function rewriting and
//! integration against Pontryagin numbers.

mod descriptor;
mod model;
mod newton;

pub use descriptor::{integrate, integrate_symbolic, ManifoldDescriptor, Partition};
pub use model::{ChernRootModel, BOTT};
pub use newton::{power_sums_to_pontryagin, NewtonTable, PontryaginPolynomial};

use thiserror::Error;

use crate::dga::DgaError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("no Pontryagin number stored for partition {0}")]
    MissingNumber(String),
    #[error("top-degree term {0} is not a Pontryagin monomial")]
    NotPontryagin(String),
    #[error("descriptor parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}
