use std::collections::BTreeMap;
use std::sync::Arc;

use super::WittenError;
use crate::dga::{Algebra, DgaElement, Generator};
use crate::geom::{power_sums_to_pontryagin, ChernRootModel, BOTT};
use crate::qmod::{eisenstein_hat, QSeries};
use crate::scalar::{rational, Rational, Scalar};

/// Name of the generator standing for the normalized series `E^_{2k}`.
pub fn eisenstein_symbol(k: u32) -> String {
    format!("E{}", 2 * k)
}

/// Algebra on `p1..p_rank` (form degree `4i`), the Bott symbol, the
/// Eisenstein symbols `E2..E_{2K}` for `K = dim/4`, and `extra`.
pub fn pontryagin_algebra(dim: u32, rank: u32, extra: Vec<Generator>, differentials: &[(&str, &str)]) -> Result<Arc<Algebra>, WittenError> {
    let k_max = dim / 4;
    let mut builder = Algebra::builder(dim)
        .generators((1..=rank.min(k_max)).map(|i| Generator::new(format!("p{i}"), 4 * i)))
        .generators((1..=k_max).map(|k| Generator::new(eisenstein_symbol(k), 0).with_weight(2 * k as i32)))
        .generator(Generator::invertible(BOTT, -2))
        .generators(extra);
    for (name, image) in differentials {
        builder = builder.differential(*name, *image);
    }
    Ok(builder.build()?)
}

/// `sum_k s_k / (2k) b^{2k} E_{2k}` with each `s_k` rewritten in the
/// Pontryagin generators present in `algebra`; classes `p_i` that the
/// algebra lacks are zero.
pub fn universal_exponent(algebra: &Arc<Algebra>) -> Result<DgaElement<Rational>, WittenError> {
    let k_max = algebra.truncation() / 4;
    let mut x = DgaElement::zero(algebra);
    if k_max == 0 {
        return Ok(x);
    }
    let table = power_sums_to_pontryagin(k_max)?;
    let b = DgaElement::<Rational>::generator(algebra, BOTT)?;
    for k in 1..=k_max {
        let rule = table.rule(k).expect("rule within table");
        let kept = crate::geom::PontryaginPolynomial::from_terms(
            rule.terms()
                .filter(|(p, _)| p.parts().iter().all(|i| algebra.index_of(&format!("p{i}")).is_some()))
                .map(|(p, c)| (p.clone(), c.clone())),
        );
        let s_k = kept.to_element::<Rational>(algebra)?;
        let e = DgaElement::generator(algebra, &eisenstein_symbol(k))?;
        let term = &(&s_k * &b.pow(2 * k)) * &e;
        x = &x + &term.scale(&rational(1, 2 * k as i64));
    }
    Ok(x)
}

/// Replaces each Eisenstein symbol by its q-expansion to `q_order`. The
/// result lives in the same algebra with the symbols' exponents cleared.
pub fn evaluate_eisenstein(elem: &DgaElement<Rational>, q_order: i64) -> Result<DgaElement<QSeries>, WittenError> {
    if q_order < 1 {
        return Err(WittenError::InvalidOrder);
    }
    let alg = elem.algebra();
    let symbols: Vec<(usize, u32)> = alg
        .generators()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let n: u32 = g.name.strip_prefix('E')?.parse().ok()?;
            (n > 0 && n.is_multiple_of(2)).then_some((i, n / 2))
        })
        .collect();
    let mut cache: BTreeMap<(u32, i32), QSeries> = BTreeMap::new();
    let mut out: BTreeMap<crate::dga::Monomial, QSeries> = BTreeMap::new();
    for (m, c) in elem.terms() {
        let mut series = QSeries::constant(0, c.clone()).truncate(q_order);
        let mut rest = m.clone();
        for &(i, k) in &symbols {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry((k, e)) {
                slot.insert(eisenstein_hat(k, q_order)?.pow(e as u32));
            }
            series = series.mul_series(&cache[&(k, e)]);
            rest.set_exponent(i, 0);
        }
        match out.get_mut(&rest) {
            Some(acc) => *acc = acc.checked_add(&series)?,
            None => {
                out.insert(rest, series);
            }
        }
    }
    Ok(DgaElement::from_terms(alg, out))
}

/// `exp(sum_k 1/2 ph(k) b^{2k} v_k)` in the model algebra, where
/// `ph(k) = s_k / k`, for arbitrary values `v_k` (one per `k <= dim/4`;
/// missing values count as zero).
pub fn witten_class_with_values<S: Scalar>(model: &ChernRootModel, values: &[S]) -> Result<DgaElement<S>, WittenError> {
    let alg = model.algebra();
    let b = model.bott::<S>();
    let mut x = DgaElement::zero(alg);
    for (k, v) in (1..=model.dim() / 4).zip(values) {
        let half = S::from_rational(&rational(1, 2 * k as i64));
        let term = &model.power_sum::<S>(k) * &b.pow(2 * k);
        x = &x + &term.scale(&v.mul_ref(&half));
    }
    Ok(x.exp_nilpotent()?)
}

/// The Witten class of the model with q-series coefficients:
/// `exp(sum_k 1/2 ph(k) b^{2k} E^_{2k})`.
pub fn witten_class(model: &ChernRootModel, q_order: i64) -> Result<DgaElement<QSeries>, WittenError> {
    if q_order < 1 {
        return Err(WittenError::InvalidOrder);
    }
    let values = (1..=model.dim() / 4)
        .map(|k| eisenstein_hat(k, q_order))
        .collect::<Result<Vec<_>, _>>()?;
    witten_class_with_values(model, &values)
}
