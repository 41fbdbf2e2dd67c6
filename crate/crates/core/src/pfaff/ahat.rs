use rayon::prelude::*;

use super::blocks::SymbolExpansion;
use super::PfaffError;
use crate::dga::{DenseBasis, DgaElement, DgaMatrix, Generator};
use crate::geom::ChernRootModel;
use crate::qmod::{bernoulli, factorial};
use crate::scalar::{pow, PiScalar};

const MODE_SYMBOL: &str = "l";
const CHUNK: u64 = 4096;

/// `zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!)`, exact in the
/// scalar tower.
pub fn zeta_even<S: PiScalar>(k: u32) -> S {
    let b = bernoulli(2 * k as usize);
    let q = b / (crate::scalar::rational(2, 1) * factorial(2 * k as u64));
    let signed = if k % 2 == 1 { q } else { -q };
    let two_pi = S::from_integer(2).mul_ref(&S::pi());
    S::from_rational(&signed).mul_ref(&pow(&two_pi, 2 * k))
}

/// `R / (2 pi i)`.
fn normalized_curvature<S: PiScalar>(model: &ChernRootModel) -> DgaMatrix<S> {
    let inv = S::two_pi_i().try_inverse().expect("2 pi i is invertible");
    model.curvature::<S>().scale(&DgaElement::constant(model.algebra(), inv))
}

/// `det(I + R^ / (2 pi i n))^{-1}` with `R^ = R / (2 pi i)`. Each factor
/// equals `[det(I + A_n) det(I - A_n)]^{-1/2}` for `A_n = R^ / (2 pi i n)`,
/// since both determinants agree.
pub fn a_hat_mode_factor<S: PiScalar>(model: &ChernRootModel, n: u64) -> Result<DgaElement<S>, PfaffError> {
    if n == 0 {
        return Err(PfaffError::DivisionByZero);
    }
    let alg = model.algebra();
    let scale = S::two_pi_i().mul_ref(&S::from_integer(n as i64)).try_inverse().expect("nonzero");
    let m = DgaMatrix::identity(alg, 2 * model.rank())
        .checked_add(&normalized_curvature::<S>(model).scale(&DgaElement::constant(alg, scale)))?;
    Ok(m.det()?.try_inverse()?)
}

/// Product of the mode factors for `n = 1..=mode_bound`.
pub fn a_hat_product<S: PiScalar>(model: &ChernRootModel, mode_bound: u64) -> Result<DgaElement<S>, PfaffError> {
    if mode_bound == 0 {
        return Err(PfaffError::InvalidBound);
    }
    let ext = model.extend(vec![Generator::invertible(MODE_SYMBOL, 0)], &[])?;
    let alg = ext.algebra();
    let l = DgaElement::<S>::generator(alg, MODE_SYMBOL)?;
    let scale = S::two_pi_i().try_inverse().expect("2 pi i is invertible");
    let shift = l.try_inverse()?.scale(&scale);
    let m = DgaMatrix::identity(alg, 2 * model.rank()).checked_add(&normalized_curvature::<S>(&ext).scale(&shift))?;
    let factor = m.det()?.try_inverse()?;
    let expansion = SymbolExpansion::split(&factor, MODE_SYMBOL, model.algebra())?;
    let basis = DenseBasis::closure(model.algebra(), expansion.monomials(), 1 << 16)?;
    let indices = expansion.dense_indices(&basis);
    let chunks: Vec<(u64, u64)> = (0..mode_bound.div_ceil(CHUNK))
        .map(|c| (c * CHUNK + 1, ((c + 1) * CHUNK).min(mode_bound)))
        .collect();
    let partials: Vec<Vec<S>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = basis.one::<S>();
            for n in lo..=hi {
                let f = expansion.evaluate_dense(&S::from_integer(n as i64), &basis, &indices);
                acc = basis.mul(&acc, &f);
            }
            acc
        })
        .collect();
    let total = partials.iter().fold(basis.one::<S>(), |acc, p| basis.mul(&acc, p));
    Ok(basis.to_element(&total))
}

/// Limit of [`a_hat_product`]:
/// `exp(sum_k zeta(2k) Tr(R^^{2k}) / (2k (2 pi i)^{2k}))`.
pub fn a_hat_limit<S: PiScalar>(model: &ChernRootModel) -> Result<DgaElement<S>, PfaffError> {
    let alg = model.algebra();
    let rhat = normalized_curvature::<S>(model);
    let mut x = DgaElement::zero(alg);
    for k in 1..=model.dim() / 4 {
        let denom = S::from_integer(2 * k as i64).mul_ref(&pow(&S::two_pi_i(), 2 * k));
        let c = zeta_even::<S>(k).mul_ref(&denom.try_inverse().expect("nonzero"));
        x = &x + &rhat.pow(2 * k).trace().scale(&c);
    }
    Ok(x.exp_nilpotent()?)
}
