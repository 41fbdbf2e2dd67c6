//! Exact decomposition of a q-series into the quasi-modular ring
//! `Q[E2, E4, E6]` (constant-term-1 normalization).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::series::{eisenstein_q, QSeries, EXACT_ORDER};
use super::QmodError;
use crate::scalar::Rational;

/// Exponents `(a, b, c)` of `E2^a E4^b E6^c`.
pub type QuasiMonomial = (u32, u32, u32);

/// Polynomial in the normalized Eisenstein series `E2, E4, E6`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuasiModularPolynomial {
    terms: BTreeMap<QuasiMonomial, Rational>,
}

/// All `(a, b, c)` with `2a + 4b + 6c = weight`.
pub fn monomials_of_weight(weight: i32) -> Vec<QuasiMonomial> {
    let mut out = Vec::new();
    if weight < 0 || weight % 2 != 0 {
        return out;
    }
    let w = weight as u32;
    for c in 0..=w / 6 {
        for b in 0..=(w - 6 * c) / 4 {
            let rest = w - 6 * c - 4 * b;
            out.push((rest / 2, b, c));
        }
    }
    out.sort();
    out
}

impl QuasiModularPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (QuasiMonomial, Rational)>) -> Self {
        let mut out = Self::default();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: QuasiMonomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QuasiMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: QuasiMonomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when some monomial with nonzero coefficient contains `E2`.
    pub fn has_e2(&self) -> bool {
        self.terms.keys().any(|&(a, _, _)| a > 0)
    }

    /// The sub-polynomial of monomials that contain `E2`.
    pub fn e2_part(&self) -> Self {
        Self {
            terms: self.terms.iter().filter(|(m, _)| m.0 > 0).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// q-expansion to the given order, tagged with `weight`.
    pub fn expand(&self, weight: i32, order: i64) -> QSeries {
        let mut acc = QSeries::zero_with(weight, order);
        if self.terms.is_empty() {
            return acc;
        }
        let max = self.terms.keys().fold((0, 0, 0), |m, &(a, b, c)| (m.0.max(a), m.1.max(b), m.2.max(c)));
        let powers = |k: u32, n: u32| -> Vec<QSeries> {
            let e = eisenstein_q(k, order).expect("order is positive");
            let mut v = vec![QSeries::constant(0, Rational::one())];
            for i in 0..n as usize {
                let next = v[i].mul_series(&e);
                v.push(next);
            }
            v
        };
        let (p2, p4, p6) = (powers(1, max.0), powers(2, max.1), powers(3, max.2));
        for (&(a, b, c), coeff) in &self.terms {
            let term = p2[a as usize]
                .mul_series(&p4[b as usize])
                .mul_series(&p6[c as usize])
                .scale(coeff);
            acc = acc.checked_add(&term).expect("homogeneous polynomial");
        }
        acc.truncate(order)
    }
}

impl fmt::Display for QuasiModularPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b, c), coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = coeff.abs();
            let factors: Vec<String> = [("E2", a), ("E4", b), ("E6", c)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(n, e)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else if abs.is_integer() {
                write!(f, "{abs}*{}", factors.join("*"))?;
            } else {
                write!(f, "({abs})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Solves for the unique polynomial in `E2, E4, E6` of the series' weight
/// matching every available coefficient.
pub fn quasi_modular_decompose(f: &QSeries) -> Result<QuasiModularPolynomial, QmodError> {
    let basis = monomials_of_weight(f.weight());
    if f.has_pole() {
        return Err(QmodError::NoDecomposition(format!(
            "series has a pole of order {} at the cusp",
            -f.min_exp()
        )));
    }
    if basis.is_empty() {
        return if f.terms().next().is_none() {
            Ok(QuasiModularPolynomial::default())
        } else {
            Err(QmodError::NoDecomposition(format!(
                "no quasi-modular forms of weight {}",
                f.weight()
            )))
        };
    }
    let order = if f.order() == EXACT_ORDER {
        let len = f.terms().map(|(n, _)| n + 1).max().unwrap_or(0);
        len.max(basis.len() as i64 + 2)
    } else {
        f.order()
    };
    if order < basis.len() as i64 + 2 {
        return Err(QmodError::InsufficientOrder {
            needed: basis.len() as i64 + 2,
            available: order,
        });
    }
    let cols: Vec<QSeries> = basis
        .iter()
        .map(|&m| QuasiModularPolynomial::from_terms([(m, Rational::one())]).expand(f.weight(), order))
        .collect();
    let rows = order as usize;
    let ncols = basis.len();
    // augmented matrix [A | f]
    let mut mat: Vec<Vec<Rational>> = (0..rows)
        .map(|n| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.coeff(n as i64)).collect();
            row.push(f.coeff(n as i64));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][col].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                let pivot_row = mat[r].clone();
                for (x, p) in mat[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[ncols].is_zero()) {
        return Err(QmodError::NoDecomposition(format!(
            "no combination of the {} weight-{} monomials matches the first {} coefficients",
            ncols,
            f.weight(),
            order
        )));
    }
    if pivot_cols.len() < ncols {
        return Err(QmodError::InsufficientOrder {
            needed: order + 1,
            available: order,
        });
    }
    Ok(QuasiModularPolynomial::from_terms(
        pivot_cols.iter().enumerate().map(|(i, &c)| (basis[c], mat[i][ncols].clone())),
    ))
}
