use std::sync::Arc;

use super::class::{eisenstein_symbol, evaluate_eisenstein, pontryagin_algebra, universal_exponent};
use super::WittenError;
use crate::dga::{parse_element, Algebra, DgaElement, Generator};
use crate::geom::{ChernRootModel, BOTT};
use crate::qmod::QSeries;
use crate::scalar::Rational;

/// Anomaly symbol `u`, standing for `c / (2 pi i (c tau + d))`.
pub const ANOMALY: &str = "u";
/// Automorphy symbol `j`, standing for `c tau + d`.
pub const AUTOMORPHY: &str = "j";
/// The string 3-form with `dH = p1`.
pub const STRING_FORM: &str = "H";

/// Symbolic Witten class of a model together with its anomaly and the
/// primitive, all over the rationals with Eisenstein symbols.
#[derive(Clone, Debug)]
pub struct AnomalySymbolic {
    pub algebra: Arc<Algebra>,
    pub class: DgaElement<Rational>,
    /// The class after `b -> b/j`, `E2 -> j^2 (E2 - u)`, `E2k -> j^{2k} E2k`.
    pub transformed: DgaElement<Rational>,
    /// `Wit - gamma^* Wit`, free of `j`.
    pub delta: DgaElement<Rational>,
    /// `H Wit (1 - exp(-1/2 p1 b^2 u)) / p1`.
    pub primitive: DgaElement<Rational>,
}

fn anomaly_algebra(model: &ChernRootModel) -> Result<Arc<Algebra>, WittenError> {
    let extra = vec![
        Generator::new(STRING_FORM, 3),
        Generator::new(ANOMALY, 0).with_weight(2),
        Generator::invertible(AUTOMORPHY, 0),
    ];
    let has_p1 = model.rank() >= 1 && model.dim() >= 4;
    let diffs: &[(&str, &str)] = if has_p1 { &[(STRING_FORM, "p1")] } else { &[] };
    pontryagin_algebra(model.dim(), model.rank() as u32, extra, diffs)
}

pub fn anomaly_symbolic(model: &ChernRootModel) -> Result<AnomalySymbolic, WittenError> {
    let alg = anomaly_algebra(model)?;
    let class = universal_exponent(&alg)?.exp_nilpotent()?;
    let gen = |s: &str| parse_element(&alg, s);
    let mut images: Vec<(String, DgaElement<Rational>)> = vec![(BOTT.to_string(), gen("b·j^-1")?)];
    for k in 1..=model.dim() / 4 {
        let e = eisenstein_symbol(k);
        let image = if k == 1 {
            gen(&format!("j^2·{e} - j^2·{ANOMALY}"))?
        } else {
            gen(&format!("j^{}·{e}", 2 * k))?
        };
        images.push((e, image));
    }
    let refs: Vec<(&str, DgaElement<Rational>)> = images.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let transformed = class.substitute_named(&alg, &refs)?;
    let delta = &class - &transformed;
    let j = alg.index_of(AUTOMORPHY).expect("automorphy symbol");
    if let Some((m, _)) = delta.terms().find(|(m, _)| m.exponent(j) != 0) {
        return Err(WittenError::AutomorphyLeft(delta.render_monomial(m)));
    }
    let primitive = match alg.index_of("p1") {
        Some(_) => {
            let p1 = gen("p1")?;
            let z = gen(&format!("(-1/2)·p1·b^2·{ANOMALY}"))?;
            let numerator = &DgaElement::one(&alg) - &z.exp_nilpotent()?;
            let factor = numerator.divide_exact(&p1)?;
            &(&gen(STRING_FORM)? * &class) * &factor
        }
        None => DgaElement::zero(&alg),
    };
    Ok(AnomalySymbolic {
        algebra: alg,
        class,
        transformed,
        delta,
        primitive,
    })
}

/// `delta(Wit)` with q-series coefficients.
pub fn anomaly_delta(model: &ChernRootModel, q_order: i64) -> Result<DgaElement<QSeries>, WittenError> {
    evaluate_eisenstein(&anomaly_symbolic(model)?.delta, q_order)
}

/// The primitive `A` with q-series coefficients.
pub fn anomaly_primitive(model: &ChernRootModel, q_order: i64) -> Result<DgaElement<QSeries>, WittenError> {
    evaluate_eisenstein(&anomaly_symbolic(model)?.primitive, q_order)
}

#[derive(Clone, Debug)]
pub struct AnomalyCheck {
    pub delta: DgaElement<QSeries>,
    pub primitive: DgaElement<QSeries>,
    /// `dA = delta(Wit)` as polynomials in the Eisenstein symbols.
    pub symbolic_holds: bool,
    /// `dA = delta(Wit)` after q-expansion.
    pub series_holds: bool,
    /// `delta(Wit)` reduces to zero modulo `p1`.
    pub vanishes_mod_p1: bool,
}

impl AnomalyCheck {
    pub fn holds(&self) -> bool {
        self.symbolic_holds && self.series_holds && self.vanishes_mod_p1
    }
}

pub fn verify_anomaly(model: &ChernRootModel, q_order: i64) -> Result<AnomalyCheck, WittenError> {
    let sym = anomaly_symbolic(model)?;
    let symbolic_holds = sym.primitive.differential() == sym.delta;
    let delta = evaluate_eisenstein(&sym.delta, q_order)?;
    let primitive = evaluate_eisenstein(&sym.primitive, q_order)?;
    let series_holds = primitive.differential() == delta;
    let vanishes_mod_p1 = match sym.algebra.index_of("p1") {
        Some(_) => sym.delta.impose_relation(&parse_element(&sym.algebra, "p1")?)?.is_zero(),
        None => sym.delta.is_zero(),
    };
    Ok(AnomalyCheck {
        delta,
        primitive,
        symbolic_holds,
        series_holds,
        vanishes_mod_p1,
    })
}
