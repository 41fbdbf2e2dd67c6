use std::collections::BTreeMap;
use std::sync::Arc;

use super::pfaffian::{pfaffian, SkewMatrix};
use super::PfaffError;
use crate::dga::{Algebra, DenseBasis, DgaElement, DgaMatrix, Generator, Monomial};
use crate::geom::ChernRootModel;
use crate::qmod::is_in_z2_plus;
use crate::scalar::PiScalar;

/// Mode `(n, m)` of the torus, restricted to the half lattice
/// `m < 0, or m = 0 and n > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex {
    n: i64,
    m: i64,
}

impl BlockIndex {
    pub fn new(n: i64, m: i64) -> Result<Self, PfaffError> {
        if is_in_z2_plus(n, m) {
            Ok(Self { n, m })
        } else {
            Err(PfaffError::InvalidIndex { n, m })
        }
    }

    pub(crate) fn new_unchecked(n: i64, m: i64) -> Self {
        debug_assert!(is_in_z2_plus(n, m));
        Self { n, m }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `n tau - m`.
    pub fn omega<S: PiScalar>(&self, tau: &S) -> S {
        tau.mul_ref(&S::from_integer(self.n)).sub_ref(&S::from_integer(self.m))
    }

    /// Eigenvalue `2 pi i (n tau - m)` of the Lie derivative on the mode.
    pub fn eigenvalue<S: PiScalar>(&self, tau: &S) -> S {
        S::two_pi_i().mul_ref(&self.omega(tau))
    }
}

/// `[[0, l I + b R], [-(l I + b R)^T, 0]]` for a mode eigenvalue `l`.
pub fn block_skew_matrix<S: PiScalar>(model: &ChernRootModel, lambda: &DgaElement<S>) -> Result<SkewMatrix<S>, PfaffError> {
    let d = 2 * model.rank();
    let alg = model.algebra();
    let lifted = lambda.transfer(alg)?;
    let br = model.curvature::<S>().scale(&model.bott());
    let a = DgaMatrix::from_fn(alg, d, |i, j| {
        if i == j {
            br.get(i, j) + &lifted
        } else {
            br.get(i, j).clone()
        }
    });
    SkewMatrix::from_off_diagonal(&a)
}

fn pfaffian_sign(rank: usize) -> bool {
    let d = 2 * rank;
    (d * d.saturating_sub(1) / 2) % 2 == 1
}

/// `Pf(block with R) / Pf(block with R = 0)`.
pub fn block_norm_pfaffian<S: PiScalar>(idx: BlockIndex, model: &ChernRootModel, tau: &S) -> Result<DgaElement<S>, PfaffError> {
    let lambda = idx.eigenvalue(tau);
    let inv = lambda.try_inverse().ok_or(PfaffError::DivisionByZero)?;
    let alg = model.algebra();
    let pf = pfaffian(&block_skew_matrix(model, &DgaElement::constant(alg, lambda))?);
    // Pf at R = 0 is (-1)^{d(d-1)/2} lambda^d
    let mut norm = crate::scalar::pow(&inv, 2 * model.rank() as u32);
    if pfaffian_sign(model.rank()) {
        norm = norm.neg_ref();
    }
    Ok(pf.scale(&norm))
}

/// `det(I + b R / (2 pi i (n tau - m)))`.
pub fn block_norm_determinant<S: PiScalar>(idx: BlockIndex, model: &ChernRootModel, tau: &S) -> Result<DgaElement<S>, PfaffError> {
    let inv = idx.eigenvalue(tau).try_inverse().ok_or(PfaffError::DivisionByZero)?;
    let alg = model.algebra();
    let scaled = model.curvature::<S>().scale(&model.bott::<S>().scale(&inv));
    let m = DgaMatrix::identity(alg, 2 * model.rank()).checked_add(&scaled)?;
    Ok(m.det()?)
}

/// An element of the model algebra written as a Laurent polynomial in an
/// auxiliary invertible symbol, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct SymbolExpansion<S> {
    algebra: Arc<Algebra>,
    terms: Vec<(Monomial, S, i32)>,
}

impl<S: PiScalar> SymbolExpansion<S> {
    /// Splits `elem`, which lives in `extended`, along `symbol` and moves
    /// the remaining monomials to `algebra`.
    pub fn split(elem: &DgaElement<S>, symbol: &str, algebra: &Arc<Algebra>) -> Result<Self, PfaffError> {
        let ext = elem.algebra();
        let si = ext
            .index_of(symbol)
            .ok_or_else(|| crate::dga::DgaError::UnknownGenerator(symbol.into()))?;
        let mut terms = Vec::new();
        for (m, c) in elem.terms() {
            let e = m.exponent(si);
            let mut rest = m.clone();
            rest.set_exponent(si, 0);
            let moved = DgaElement::from_terms(ext, BTreeMap::from([(rest, S::one_value())])).transfer(algebra)?;
            let (mono, _) = moved.terms().next().expect("unit coefficient survives");
            terms.push((mono.clone(), c.clone(), e));
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            terms,
        })
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(m, _, _)| m.clone())
    }

    /// Coefficient of each term after substituting `value` for the symbol.
    fn coefficients(&self, value: &S) -> Vec<S> {
        let inv = value.try_inverse();
        self.terms
            .iter()
            .map(|(_, c, e)| {
                let base = if *e < 0 {
                    inv.as_ref().expect("symbol value is invertible")
                } else {
                    value
                };
                c.mul_ref(&crate::scalar::pow(base, e.unsigned_abs()))
            })
            .collect()
    }

    pub fn evaluate(&self, value: &S) -> DgaElement<S> {
        let mut out: BTreeMap<Monomial, S> = BTreeMap::new();
        for ((m, _, _), c) in self.terms.iter().zip(self.coefficients(value)) {
            let entry = out.entry(m.clone()).or_insert_with(S::zero_value);
            *entry = entry.add_ref(&c);
        }
        DgaElement::from_terms(&self.algebra, out)
    }

    pub fn dense_indices(&self, basis: &DenseBasis) -> Vec<usize> {
        self.terms
            .iter()
            .map(|(m, _, _)| basis.index_of(m).expect("basis contains the seeds"))
            .collect()
    }

    pub fn evaluate_dense(&self, value: &S, basis: &DenseBasis, indices: &[usize]) -> Vec<S> {
        let mut v = vec![S::zero_value(); basis.len()];
        for (&i, c) in indices.iter().zip(self.coefficients(value)) {
            v[i] = v[i].add_ref(&c);
        }
        v
    }
}

/// Normalized block Pfaffian as a function of the mode eigenvalue: the
/// Pfaffian is taken once with a symbolic eigenvalue `l` and divided by
/// its value at `R = 0`.
#[derive(Clone, Debug)]
pub struct BlockExpansion<S> {
    expansion: SymbolExpansion<S>,
}

pub(crate) const EIGENVALUE_SYMBOL: &str = "l";

impl<S: PiScalar> BlockExpansion<S> {
    pub fn new(model: &ChernRootModel) -> Result<Self, PfaffError> {
        let ext = model.extend(vec![Generator::invertible(EIGENVALUE_SYMBOL, 0)], &[])?;
        let l = DgaElement::<S>::generator(ext.algebra(), EIGENVALUE_SYMBOL)?;
        let pf = pfaffian(&block_skew_matrix(&ext, &l)?);
        let mut norm = l.pow(2 * model.rank() as u32);
        if pfaffian_sign(model.rank()) {
            norm = norm.neg_elem();
        }
        let ratio = pf.divide_exact(&norm)?;
        Ok(Self {
            expansion: SymbolExpansion::split(&ratio, EIGENVALUE_SYMBOL, model.algebra())?,
        })
    }

    pub fn expansion(&self) -> &SymbolExpansion<S> {
        &self.expansion
    }

    pub fn at(&self, idx: BlockIndex, tau: &S) -> Result<DgaElement<S>, PfaffError> {
        let lambda = idx.eigenvalue(tau);
        if lambda.is_zero_value() {
            return Err(PfaffError::DivisionByZero);
        }
        Ok(self.expansion.evaluate(&lambda))
    }
}
