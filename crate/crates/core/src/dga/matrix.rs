use std::sync::Arc;

use super::algebra::Algebra;
use super::element::DgaElement;
use super::DgaError;
use crate::scalar::Scalar;

/// Square matrix with entries in a truncated graded-commutative algebra.
///
/// The determinant assumes entries of even parity, which commute.
#[derive(Clone, Debug)]
pub struct DgaMatrix<S> {
    algebra: Arc<Algebra>,
    size: usize,
    entries: Vec<DgaElement<S>>,
}

impl<S: Scalar> PartialEq for DgaMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.entries == other.entries
    }
}

impl<S: Scalar> DgaMatrix<S> {
    pub fn from_rows(algebra: &Arc<Algebra>, rows: Vec<Vec<DgaElement<S>>>) -> Result<Self, DgaError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(DgaError::InvalidMatrix(format!("row of length {} in a {size}x{size} matrix", row.len())));
            }
            for e in row {
                if !Arc::ptr_eq(e.algebra(), algebra) && **e.algebra() != **algebra {
                    return Err(DgaError::AlgebraMismatch);
                }
                entries.push(e);
            }
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            size,
            entries,
        })
    }

    pub fn from_fn(algebra: &Arc<Algebra>, size: usize, f: impl Fn(usize, usize) -> DgaElement<S>) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        Self {
            algebra: Arc::clone(algebra),
            size,
            entries,
        }
    }

    pub fn zeros(algebra: &Arc<Algebra>, size: usize) -> Self {
        Self::from_fn(algebra, size, |_, _| DgaElement::zero(algebra))
    }

    pub fn identity(algebra: &Arc<Algebra>, size: usize) -> Self {
        Self::from_fn(algebra, size, |i, j| {
            if i == j {
                DgaElement::one(algebra)
            } else {
                DgaElement::zero(algebra)
            }
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &DgaElement<S> {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: DgaElement<S>) {
        self.entries[i * self.size + j] = value;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.algebra, self.size, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &DgaElement<S>) -> Self {
        Self::from_fn(&self.algebra, self.size, |i, j| self.get(i, j) * c)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, DgaError> {
        self.check_shape(rhs)?;
        Ok(Self::from_fn(&self.algebra, self.size, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, DgaError> {
        self.check_shape(rhs)?;
        let n = self.size;
        Ok(Self::from_fn(&self.algebra, n, |i, j| {
            let mut acc = DgaElement::zero(&self.algebra);
            for k in 0..n {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    fn check_shape(&self, rhs: &Self) -> Result<(), DgaError> {
        if self.size != rhs.size {
            return Err(DgaError::InvalidMatrix(format!("sizes {} and {} differ", self.size, rhs.size)));
        }
        if !Arc::ptr_eq(&self.algebra, &rhs.algebra) && *self.algebra != *rhs.algebra {
            return Err(DgaError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(&self.algebra, self.size);
        for _ in 0..n {
            acc = acc.checked_mul(self).expect("same shape");
        }
        acc
    }

    pub fn trace(&self) -> DgaElement<S> {
        (0..self.size).fold(DgaElement::zero(&self.algebra), |acc, i| &acc + self.get(i, i))
    }

    /// Block-diagonal matrix with `self` then `other` on the diagonal.
    pub fn block_diagonal(&self, other: &Self) -> Result<Self, DgaError> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) && *self.algebra != *other.algebra {
            return Err(DgaError::AlgebraMismatch);
        }
        let (a, b) = (self.size, other.size);
        Ok(Self::from_fn(&self.algebra, a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - a, j - a).clone(),
            _ => DgaElement::zero(&self.algebra),
        }))
    }

    pub fn is_even(&self) -> bool {
        self.entries.iter().all(DgaElement::is_even)
    }

    pub fn is_skew(&self) -> bool {
        (0..self.size).all(|i| {
            self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == self.get(j, i).neg_elem())
        })
    }

    /// Determinant by elimination on invertible pivots, falling back to
    /// cofactor expansion along a column with no invertible entry.
    pub fn det(&self) -> Result<DgaElement<S>, DgaError> {
        if !self.is_even() {
            return Err(DgaError::InvalidMatrix("determinant needs even entries".into()));
        }
        let n = self.size;
        let rows: Vec<Vec<DgaElement<S>>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        Ok(det_rows(&self.algebra, rows))
    }
}

fn det_rows<S: Scalar>(alg: &Arc<Algebra>, mut rows: Vec<Vec<DgaElement<S>>>) -> DgaElement<S> {
    let n = rows.len();
    if n == 0 {
        return DgaElement::one(alg);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = DgaElement::one(alg);
    let mut negative = false;
    while !rows.is_empty() {
        let size = rows.len();
        let pivot = (0..size).find_map(|i| rows[i][0].try_inverse().ok().map(|inv| (i, inv)));
        let Some((p, inv)) = pivot else {
            let rest = expand_first_column(alg, &rows);
            let head = if negative { acc.neg_elem() } else { acc };
            return &head * &rest;
        };
        if p != 0 {
            rows.swap(0, p);
            negative = !negative;
        }
        let top = rows.remove(0);
        acc = &acc * &top[0];
        for row in rows.iter_mut() {
            if row[0].is_zero() {
                row.remove(0);
                continue;
            }
            let factor = &row[0] * &inv;
            let lead = row.remove(0);
            debug_assert!(!lead.is_zero());
            for (x, t) in row.iter_mut().zip(top.iter().skip(1)) {
                if !t.is_zero() {
                    *x = &*x - &(&factor * t);
                }
            }
        }
    }
    if negative {
        acc.neg_elem()
    } else {
        acc
    }
}

fn expand_first_column<S: Scalar>(alg: &Arc<Algebra>, rows: &[Vec<DgaElement<S>>]) -> DgaElement<S> {
    let mut acc = DgaElement::zero(alg);
    for i in 0..rows.len() {
        if rows[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DgaElement<S>>> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, r)| r[1..].to_vec())
            .collect();
        let term = &rows[i][0] * &det_rows(alg, minor);
        acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
