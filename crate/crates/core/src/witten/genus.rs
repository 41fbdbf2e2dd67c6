use serde::Serialize;

use super::class::{evaluate_eisenstein, pontryagin_algebra, universal_exponent};
use super::WittenError;
use crate::dga::DgaElement;
use crate::geom::{integrate_symbolic, ManifoldDescriptor, BOTT};
use crate::qmod::{quasi_modular_decompose, QSeries};
use crate::scalar::Rational;

/// The genus as a polynomial in the Eisenstein symbols (and the Bott
/// symbol), before any q-expansion. Every term is checked to carry
/// Eisenstein weight `dim/2`.
pub fn witten_genus_symbolic(descriptor: &ManifoldDescriptor) -> Result<DgaElement<Rational>, WittenError> {
    let dim = descriptor.dim();
    let alg = pontryagin_algebra(dim, dim / 4, Vec::new(), &[])?;
    let class = universal_exponent(&alg)?.exp_nilpotent()?;
    let top = integrate_symbolic(descriptor, &class)?;
    let expected = (dim / 2) as i32;
    let bott = alg.index_of(BOTT).expect("Bott symbol");
    for (m, _) in top.terms() {
        let weight = alg.weight_of(m);
        if weight != expected || m.exponent(bott) != expected {
            return Err(WittenError::WeightMismatch {
                term: top.render_monomial(m),
                expected,
                found: weight,
            });
        }
    }
    Ok(top)
}

/// The Witten genus as a q-series of weight `dim/2`.
pub fn witten_genus(descriptor: &ManifoldDescriptor, q_order: i64) -> Result<QSeries, WittenError> {
    let symbolic = witten_genus_symbolic(descriptor)?;
    let weight = (descriptor.dim() / 2) as i32;
    let series = evaluate_eisenstein(&symbolic, q_order)?;
    let mut total = QSeries::zero_with(weight, q_order);
    for (_, c) in series.terms() {
        total = total.checked_add(c)?;
    }
    Ok(total.with_weight(weight))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Modular,
    QuasiModular,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Modular => "modular",
            Verdict::QuasiModular => "quasi-modular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularityReport {
    pub weight: i32,
    /// The genus written in the normalized `E2, E4, E6`.
    pub decomposition: String,
    /// The part of the decomposition containing `E2`.
    pub e2_coefficient: String,
    pub verdict: Verdict,
    /// The genus series itself.
    pub series: String,
}

/// Genus, its decomposition in `E2, E4, E6`, and whether `E2` appears.
pub fn string_modularity_check(descriptor: &ManifoldDescriptor, q_order: i64) -> Result<ModularityReport, WittenError> {
    let genus = witten_genus(descriptor, q_order)?;
    let poly = quasi_modular_decompose(&genus)?;
    let e2 = poly.e2_part();
    Ok(ModularityReport {
        weight: genus.weight(),
        decomposition: poly.to_string(),
        e2_coefficient: e2.to_string(),
        verdict: if e2.is_zero() { Verdict::Modular } else { Verdict::QuasiModular },
        series: genus.to_string(),
    })
}

