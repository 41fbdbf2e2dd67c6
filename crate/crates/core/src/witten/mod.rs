//! The Witten class and genus, the weight-2 anomaly `delta(Wit)` and its
//! primitive `A` with `dA = delta(Wit)`.
//!
//! Everything symbolic happens over the rationals with the normalized
//! Eisenstein series as form-degree-0 generators `E2, E4, ...`; they are
//! replaced by their q-expansions only at the end.

mod anomaly;
mod class;
mod genus;
#[cfg(test)]
mod tests;

pub use anomaly::{anomaly_delta, anomaly_primitive, anomaly_symbolic, verify_anomaly, AnomalyCheck, AnomalySymbolic};
pub use class::{
    eisenstein_symbol, evaluate_eisenstein, pontryagin_algebra, universal_exponent, witten_class, witten_class_with_values,
};
pub use genus::{string_modularity_check, witten_genus, witten_genus_symbolic, ModularityReport, Verdict};

use thiserror::Error;

use crate::dga::DgaError;
use crate::geom::GeomError;
use crate::qmod::QmodError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittenError {
    #[error("q-order must be at least 1")]
    InvalidOrder,
    #[error("genus term {term} has Eisenstein weight {found}, expected {expected}")]
    WeightMismatch { term: String, expected: i32, found: i32 },
    #[error("automorphy symbol survives in {0}")]
    AutomorphyLeft(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Qmod(#[from] QmodError),
}
