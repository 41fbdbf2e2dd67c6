use std::collections::HashMap;
use std::sync::Arc;

use super::algebra::{Algebra, Monomial};
use super::element::DgaElement;
use super::DgaError;
use crate::scalar::Scalar;

/// Basis of a finite subalgebra spanned by the multiplicative closure of a
/// set of monomials, with a precomputed multiplication table.
///
/// Used for long products of elements that all live in the same small
/// subalgebra, where sparse map-based multiplication would dominate.
#[derive(Clone, Debug)]
pub struct DenseBasis {
    algebra: Arc<Algebra>,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    table: Vec<Vec<Option<(usize, bool)>>>,
}

impl DenseBasis {
    /// Closure of `seeds` and the unit under truncated multiplication.
    /// Fails with `NotNilpotent` when the closure exceeds `limit` monomials.
    pub fn closure(algebra: &Arc<Algebra>, seeds: impl IntoIterator<Item = Monomial>, limit: usize) -> Result<Self, DgaError> {
        let unit = algebra.unit_monomial();
        let mut monomials = vec![unit.clone()];
        let mut index = HashMap::from([(unit, 0usize)]);
        let mut gens = Vec::new();
        for s in seeds {
            if !index.contains_key(&s) {
                index.insert(s.clone(), monomials.len());
                monomials.push(s.clone());
            }
            gens.push(s);
        }
        let mut frontier = 0;
        while frontier < monomials.len() {
            let m = monomials[frontier].clone();
            frontier += 1;
            for g in &gens {
                let (dm, dg) = (algebra.degree_of(&m), algebra.degree_of(g));
                if let Some((p, _)) = algebra.mul_monomials(&m, g, dm, dg) {
                    if !index.contains_key(&p) {
                        if monomials.len() >= limit {
                            return Err(DgaError::NotNilpotent);
                        }
                        index.insert(p.clone(), monomials.len());
                        monomials.push(p);
                    }
                }
            }
        }
        let degrees: Vec<u32> = monomials.iter().map(|m| algebra.degree_of(m)).collect();
        let table = (0..monomials.len())
            .map(|i| {
                (0..monomials.len())
                    .map(|j| {
                        algebra
                            .mul_monomials(&monomials[i], &monomials[j], degrees[i], degrees[j])
                            .and_then(|(p, neg)| index.get(&p).map(|&k| (k, neg)))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            algebra: Arc::clone(algebra),
            monomials,
            index,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn one<S: Scalar>(&self) -> Vec<S> {
        let mut v = vec![S::zero_value(); self.len()];
        v[0] = S::one_value();
        v
    }

    pub fn to_dense<S: Scalar>(&self, e: &DgaElement<S>) -> Result<Vec<S>, DgaError> {
        let mut v = vec![S::zero_value(); self.len()];
        for (m, c) in e.terms() {
            let i = self
                .index_of(m)
                .ok_or_else(|| DgaError::InvalidSubstitution(format!("{} is outside the dense basis", e.render_monomial(m))))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn to_element<S: Scalar>(&self, v: &[S]) -> DgaElement<S> {
        DgaElement::from_terms(
            &self.algebra,
            self.monomials.iter().cloned().zip(v.iter().cloned()).collect(),
        )
    }

    pub fn mul<S: Scalar>(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero_value(); self.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero_value() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero_value() {
                    continue;
                }
                if let Some((k, neg)) = self.table[i][j] {
                    let t = x.mul_ref(y);
                    out[k] = if neg { out[k].sub_ref(&t) } else { out[k].add_ref(&t) };
                }
            }
        }
        out
    }
}
