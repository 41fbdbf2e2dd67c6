use std::sync::Arc;

use super::PfaffError;
use crate::dga::{Algebra, DgaElement, DgaMatrix};
use crate::scalar::Scalar;

/// Matrices at or below this size use the perfect-matching expansion.
const EXPANSION_LIMIT: usize = 8;

/// Even-size skew-symmetric matrix with even entries.
#[derive(Clone, Debug)]
pub struct SkewMatrix<S> {
    inner: DgaMatrix<S>,
}

impl<S: Scalar> PartialEq for SkewMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl<S: Scalar> SkewMatrix<S> {
    pub fn new(m: DgaMatrix<S>) -> Result<Self, PfaffError> {
        if !m.size().is_multiple_of(2) {
            return Err(PfaffError::OddSize(m.size()));
        }
        if !m.is_even() {
            return Err(PfaffError::NotEven);
        }
        if !m.is_skew() {
            return Err(PfaffError::NotSkew);
        }
        Ok(Self { inner: m })
    }

    /// `[[0, A], [-A^T, 0]]`.
    pub fn from_off_diagonal(a: &DgaMatrix<S>) -> Result<Self, PfaffError> {
        let d = a.size();
        let alg = a.algebra();
        let m = DgaMatrix::from_fn(alg, 2 * d, |i, j| match (i < d, j < d) {
            (true, false) => a.get(i, j - d).clone(),
            (false, true) => a.get(j, i - d).neg_elem(),
            _ => DgaElement::zero(alg),
        });
        Self::new(m)
    }

    pub fn matrix(&self) -> &DgaMatrix<S> {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    /// `G^T M G`, again skew.
    pub fn congruence(&self, g: &DgaMatrix<S>) -> Result<Self, PfaffError> {
        let m = g.transpose().checked_mul(&self.inner)?.checked_mul(g)?;
        Self::new(m)
    }
}

/// Pfaffian of a skew matrix; `Pf(M)^2 = det(M)`.
pub fn pfaffian<S: Scalar>(m: &SkewMatrix<S>) -> DgaElement<S> {
    let n = m.size();
    let rows: Vec<Vec<DgaElement<S>>> = (0..n).map(|i| (0..n).map(|j| m.inner.get(i, j).clone()).collect()).collect();
    pf(m.inner.algebra(), rows)
}

fn pf<S: Scalar>(alg: &Arc<Algebra>, a: Vec<Vec<DgaElement<S>>>) -> DgaElement<S> {
    let n = a.len();
    if n == 0 {
        return DgaElement::one(alg);
    }
    if n <= EXPANSION_LIMIT {
        return expand(alg, &a);
    }
    eliminate(alg, a)
}

/// `Pf(A) = sum_{j >= 1} (-1)^{j+1} a_{0j} Pf(A without rows/cols 0, j)`.
fn expand<S: Scalar>(alg: &Arc<Algebra>, a: &[Vec<DgaElement<S>>]) -> DgaElement<S> {
    let n = a.len();
    let mut acc = DgaElement::zero(alg);
    for j in 1..n {
        if a[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<DgaElement<S>>> = keep.iter().map(|&r| keep.iter().map(|&c| a[r][c].clone()).collect()).collect();
        let term = &a[0][j] * &pf(alg, minor);
        acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Skew elimination on an invertible pivot in the first row, falling back
/// to expansion when the row has none.
fn eliminate<S: Scalar>(alg: &Arc<Algebra>, mut a: Vec<Vec<DgaElement<S>>>) -> DgaElement<S> {
    let n = a.len();
    let Some((j, inv)) = (1..n).find_map(|j| a[0][j].try_inverse().ok().map(|inv| (j, inv))) else {
        return expand(alg, &a);
    };
    let mut negative = false;
    if j != 1 {
        a.swap(1, j);
        for row in a.iter_mut() {
            row.swap(1, j);
        }
        negative = true;
    }
    // Pf(A) = a01 Pf(D + C^T B^{-1} C) for the leading 2x2 block B
    let pivot = a[0][1].clone();
    let mut reduced = Vec::with_capacity(n - 2);
    for i in 2..n {
        let mut row = Vec::with_capacity(n - 2);
        for k in 2..n {
            if i == k {
                row.push(DgaElement::zero(alg));
                continue;
            }
            let corr = &(&a[1][i] * &a[0][k]) - &(&a[0][i] * &a[1][k]);
            row.push(if corr.is_zero() { a[i][k].clone() } else { &a[i][k] + &(&corr * &inv) });
        }
        reduced.push(row);
    }
    let value = &pivot * &pf(alg, reduced);
    if negative {
        value.neg_elem()
    } else {
        value
    }
}
