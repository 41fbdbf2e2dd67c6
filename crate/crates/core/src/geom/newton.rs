use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::descriptor::Partition;
use super::GeomError;
use crate::dga::{Algebra, DgaElement};
use crate::scalar::{Rational, Scalar};

/// Polynomial in Pontryagin classes, keyed by the partition `lambda` of the
/// monomial `p_lambda = prod p_{lambda_i}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PontryaginPolynomial {
    terms: BTreeMap<Partition, Rational>,
}

impl PontryaginPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, Rational)>) -> Self {
        let mut out = Self::default();
        for (p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    fn add_term(&mut self, p: Partition, c: Rational) {
        let entry = self.terms.entry(p.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Partition) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(p, c)| (p.clone(), c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.union(b), x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, x)| (p.clone(), x * c)))
    }

    /// The element `sum c_lambda p_lambda` of an algebra with generators
    /// `p1, p2, ...`.
    pub fn to_element<S: Scalar>(&self, algebra: &Arc<Algebra>) -> Result<DgaElement<S>, GeomError> {
        let mut acc = DgaElement::zero(algebra);
        for (p, c) in &self.terms {
            let names: Vec<String> = p.parts().iter().map(|i| format!("p{i}")).collect();
            let mut counts: BTreeMap<&str, i32> = BTreeMap::new();
            for n in &names {
                *counts.entry(n.as_str()).or_default() += 1;
            }
            let factors: Vec<(&str, i32)> = counts.into_iter().collect();
            acc = &acc + &DgaElement::monomial(algebra, &factors, S::from_rational(c))?;
        }
        Ok(acc)
    }
}

/// Newton's identities: each power sum `s_k` of the squared roots written
/// in the Pontryagin classes `p_i = e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonTable {
    rules: Vec<PontryaginPolynomial>,
}

impl NewtonTable {
    pub fn k_max(&self) -> u32 {
        self.rules.len() as u32
    }

    /// The rewrite of `s_k`, `1 <= k <= k_max`.
    pub fn rule(&self, k: u32) -> Option<&PontryaginPolynomial> {
        self.rules.get((k as usize).checked_sub(1)?)
    }
}

/// `s_k = sum_{i<k} (-1)^{i-1} p_i s_{k-i} + (-1)^{k-1} k p_k`.
pub fn power_sums_to_pontryagin(k_max: u32) -> Result<NewtonTable, GeomError> {
    if k_max == 0 {
        return Err(GeomError::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut rules: Vec<PontryaginPolynomial> = Vec::new();
    for k in 1..=k_max {
        let sign = |i: u32| if i % 2 == 1 { Rational::one() } else { -Rational::one() };
        let p = |i: u32| PontryaginPolynomial::from_terms([(Partition::single(i), Rational::one())]);
        let mut s = p(k).scale(&(sign(k) * Rational::from_integer(k.into())));
        for i in 1..k {
            let term = p(i).mul(&rules[(k - i - 1) as usize]).scale(&sign(i));
            s = s.add(&term);
        }
        rules.push(s);
    }
    Ok(NewtonTable { rules })
}
