use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::algebra::{Algebra, Monomial};
use super::DgaError;
use crate::scalar::{Rational, Scalar};

/// Element of a truncated graded-commutative algebra with coefficients in `S`.
///
/// Terms are kept in canonical order with nonzero coefficients only, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug)]
pub struct DgaElement<S> {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> PartialEq for DgaElement<S> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<S: Scalar> DgaElement<S> {
    /// Builds an element, dropping zero coefficients and anything above the
    /// truncation degree.
    pub fn from_terms(algebra: &Arc<Algebra>, terms: BTreeMap<Monomial, S>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(m, c)| !c.is_zero_value() && algebra.degree_of(m) <= algebra.truncation())
            .collect();
        Self {
            algebra: Arc::clone(algebra),
            terms,
        }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(algebra: &Arc<Algebra>, c: S) -> Self {
        Self::from_terms(algebra, BTreeMap::from([(algebra.unit_monomial(), c)]))
    }

    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Self::constant(algebra, S::one_value())
    }

    pub fn generator(algebra: &Arc<Algebra>, name: &str) -> Result<Self, DgaError> {
        Self::monomial(algebra, &[(name, 1)], S::one_value())
    }

    pub fn monomial(algebra: &Arc<Algebra>, factors: &[(&str, i32)], c: S) -> Result<Self, DgaError> {
        // multiply factor by factor so odd generators pick up Koszul signs
        let mut acc = Self::constant(algebra, c);
        for (name, e) in factors {
            let mut m = algebra.unit_monomial();
            let i = algebra
                .index_of(name)
                .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
            m.0[i] = *e;
            algebra.validate_monomial(&m)?;
            let f = Self::from_terms(algebra, BTreeMap::from([(m, S::one_value())]));
            acc = acc.checked_mul(&f)?;
        }
        Ok(acc)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial written as `(name, exponent)` pairs.
    pub fn coefficient(&self, factors: &[(&str, i32)]) -> Result<S, DgaError> {
        let m = self.algebra.monomial(factors)?;
        Ok(self.terms.get(&m).cloned().unwrap_or_else(S::zero_value))
    }

    pub fn coefficient_of(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero_value)
    }

    pub fn constant_term(&self) -> S {
        self.coefficient_of(&self.algebra.unit_monomial())
    }

    fn check_same(&self, other: &Self) -> Result<(), DgaError> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(DgaError::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, DgaError> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    *x = x.add_ref(c);
                    if x.is_zero_value() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, DgaError> {
        self.checked_add(&other.neg_elem())
    }

    pub fn neg_elem(&self) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(
            &self.algebra,
            self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(s))).collect(),
        )
    }

    /// Graded-commutative product, truncated above the algebra's degree.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, DgaError> {
        self.check_same(other)?;
        let alg = &self.algebra;
        let rhs: Vec<(&Monomial, &S, u32)> = other.terms.iter().map(|(m, c)| (m, c, alg.degree_of(m))).collect();
        let mut out: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = alg.degree_of(ma);
            for (mb, cb, db) in &rhs {
                let Some((m, negative)) = alg.mul_monomials(ma, mb, da, *db) else {
                    continue;
                };
                let mut c = ca.mul_ref(cb);
                if negative {
                    c = c.neg_ref();
                }
                match out.get_mut(&m) {
                    Some(x) => *x = x.add_ref(&c),
                    None => {
                        out.insert(m, c);
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero_value());
        Ok(Self {
            algebra: Arc::clone(alg),
            terms: out,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.algebra);
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        self.algebra.degree_of(m)
    }

    /// Part of form degree exactly `degree`.
    pub fn component(&self, degree: u32) -> Self {
        self.filter(|m| self.algebra.degree_of(m) == degree)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.algebra.degree_of(m)).max()
    }

    /// The common form degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.algebra.degree_of(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| !self.algebra.is_odd_monomial(m))
    }

    /// Graded Leibniz extension of the generators' differentials.
    pub fn differential(&self) -> Self {
        let alg = &self.algebra;
        let mut acc = Self::zero(alg);
        for (m, c) in &self.terms {
            let mut prefix_degree = 0u32;
            for i in 0..alg.len() {
                let e = m.exponent(i);
                let g_degree = alg.generator(i).degree;
                if e > 0 && !alg.differential_terms(i).is_empty() {
                    let mut prefix = alg.unit_monomial();
                    let mut suffix = alg.unit_monomial();
                    for j in 0..alg.len() {
                        if j < i {
                            prefix.0[j] = m.exponent(j);
                        } else if j > i {
                            suffix.0[j] = m.exponent(j);
                        }
                    }
                    prefix.0[i] = e - 1;
                    let dg = Self::from_terms(
                        alg,
                        alg.differential_terms(i)
                            .iter()
                            .map(|(dm, dc)| (dm.clone(), S::from_rational(dc)))
                            .collect(),
                    );
                    // d(g^e) = e g^{e-1} dg for even g; e = 1 for odd g
                    let mut coeff = c.mul_ref(&S::from_integer(e as i64));
                    if prefix_degree % 2 == 1 {
                        coeff = coeff.neg_ref();
                    }
                    let left = Self::from_terms(alg, BTreeMap::from([(prefix, coeff)]));
                    let right = Self::from_terms(alg, BTreeMap::from([(suffix, S::one_value())]));
                    acc = &acc + &(&(&left * &dg) * &right);
                }
                prefix_degree += e.max(0) as u32 * g_degree;
            }
        }
        acc
    }

    /// `exp(a)` for an even element with no form-degree-0 part; the series
    /// terminates by truncation.
    pub fn exp_nilpotent(&self) -> Result<Self, DgaError> {
        if self.terms.keys().any(|m| self.algebra.degree_of(m) == 0) {
            return Err(DgaError::NotNilpotent);
        }
        if !self.is_even() {
            return Err(DgaError::OddExponent);
        }
        let mut acc = Self::one(&self.algebra);
        let mut power = Self::one(&self.algebra);
        let mut n = 1i64;
        loop {
            power = (&power * self).scale(&S::from_rational(&Rational::new(1.into(), n.into())));
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
            n += 1;
        }
        Ok(acc)
    }

    /// `log(u)` for `u = 1 + (terms of positive form degree)`.
    pub fn log_unital(&self) -> Result<Self, DgaError> {
        let one = Self::one(&self.algebra);
        let degree_zero = self.component(0);
        if degree_zero != one {
            return Err(DgaError::NotUnital);
        }
        let nil = self - &one;
        if !nil.is_even() {
            return Err(DgaError::OddExponent);
        }
        let mut acc = Self::zero(&self.algebra);
        let mut power = Self::one(&self.algebra);
        let mut n = 1i64;
        loop {
            power = &power * &nil;
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale(&S::from_rational(&Rational::new(sign.into(), n.into())));
            n += 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse when the degree-0 part is a unit scalar times
    /// a monomial in invertible generators.
    pub fn try_inverse(&self) -> Result<Self, DgaError> {
        let alg = &self.algebra;
        let head = self.component(0);
        let (m0, c0) = match head.terms.iter().next() {
            Some(t) if head.terms.len() == 1 => t,
            _ => return Err(DgaError::NotInvertible),
        };
        if m0.0.iter().enumerate().any(|(i, e)| *e != 0 && !alg.generator(i).invertible) {
            return Err(DgaError::NotInvertible);
        }
        let c_inv = c0.try_inverse().ok_or(DgaError::NotInvertible)?;
        let m_inv = Monomial(m0.0.iter().map(|e| -e).collect());
        let head_inv = Self::from_terms(alg, BTreeMap::from([(m_inv, c_inv)]));
        let rest = &(self - &head) * &head_inv;
        // (head (1 + rest))^{-1} = head^{-1} sum (-rest)^j
        let neg_rest = -&rest;
        let mut acc = Self::one(alg);
        let mut power = Self::one(alg);
        loop {
            power = &power * &neg_rest;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(&acc * &head_inv)
    }

    /// Single-term `c * m` with `c` invertible and `m` even: the pieces
    /// needed to divide by or reduce modulo it.
    fn unit_times_even_monomial(&self) -> Result<(Monomial, S), DgaError> {
        let (m, c) = match self.terms.iter().next() {
            Some(t) if self.terms.len() == 1 => t,
            _ => return Err(DgaError::InvalidDivisor("divisor must be a single term".into())),
        };
        if (0..self.algebra.len()).any(|i| self.algebra.is_odd(i) && m.exponent(i) != 0) {
            return Err(DgaError::InvalidDivisor("divisor must not contain odd generators".into()));
        }
        Ok((m.clone(), c.clone()))
    }

    /// The unique `q` with `q * g = self`, for `g` a unit times an even monomial.
    pub fn divide_exact(&self, g: &Self) -> Result<Self, DgaError> {
        self.check_same(g)?;
        let (gm, gc) = g.unit_times_even_monomial()?;
        let inv = gc
            .try_inverse()
            .ok_or_else(|| DgaError::InvalidDivisor("divisor coefficient is not a unit".into()))?;
        let alg = &self.algebra;
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut q = m.clone();
            for i in 0..alg.len() {
                q.0[i] -= gm.exponent(i);
                if q.0[i] < 0 && !alg.generator(i).invertible {
                    return Err(DgaError::NotDivisible(self.render_monomial(m)));
                }
            }
            out.insert(q, c.mul_ref(&inv));
        }
        Ok(Self::from_terms(alg, out))
    }

    /// Reduction modulo the ideal generated by a closed even monomial:
    /// every term divisible by it is dropped.
    pub fn impose_relation(&self, rel: &Self) -> Result<Self, DgaError> {
        self.check_same(rel)?;
        let (rm, _) = rel
            .unit_times_even_monomial()
            .map_err(|e| DgaError::InvalidRelation(e.to_string()))?;
        if !rel.differential().is_zero() {
            return Err(DgaError::InvalidRelation("relation must be closed".into()));
        }
        let alg = Arc::clone(&self.algebra);
        let divisible = |m: &Monomial| {
            (0..alg.len()).all(|i| alg.generator(i).invertible || m.exponent(i) >= rm.exponent(i))
        };
        Ok(self.filter(|m| !divisible(m)))
    }

    /// Algebra homomorphism sending generator `i` of this algebra to
    /// `images[i]` in `target`. Images must match the generators' parity.
    pub fn substitute(&self, target: &Arc<Algebra>, images: &[Self]) -> Result<Self, DgaError> {
        let alg = &self.algebra;
        if images.len() != alg.len() {
            return Err(DgaError::InvalidSubstitution(format!(
                "expected {} images, got {}",
                alg.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if !same_algebra(img.algebra(), target) {
                return Err(DgaError::AlgebraMismatch);
            }
            let odd = alg.is_odd(i);
            if img.terms.keys().any(|m| target.is_odd_monomial(m) != odd) {
                return Err(DgaError::InvalidSubstitution(format!(
                    "image of {} has the wrong parity",
                    alg.generator(i).name
                )));
            }
        }
        let mut powers: HashMap<(usize, i32), Self> = HashMap::new();
        let mut acc = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(slot) = powers.entry((i, e)) {
                    let base = if e < 0 { images[i].try_inverse()? } else { images[i].clone() };
                    slot.insert(base.pow(e.unsigned_abs()));
                }
                term = &term * &powers[&(i, e)];
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitution given by name; unnamed generators go to the
    /// same-named generator of `target`.
    pub fn substitute_named(&self, target: &Arc<Algebra>, images: &[(&str, Self)]) -> Result<Self, DgaError> {
        let mut full = Vec::with_capacity(self.algebra.len());
        for g in self.algebra.generators() {
            match images.iter().find(|(n, _)| *n == g.name) {
                Some((_, img)) => full.push(img.clone()),
                None => full.push(Self::generator(target, &g.name)?),
            }
        }
        for (n, _) in images {
            if self.algebra.index_of(n).is_none() {
                return Err(DgaError::UnknownGenerator(n.to_string()));
            }
        }
        self.substitute(target, &full)
    }

    /// Re-expresses the element in another algebra that contains every
    /// generator it uses, matched by name and degree.
    pub fn transfer(&self, target: &Arc<Algebra>) -> Result<Self, DgaError> {
        let alg = &self.algebra;
        let mut map = Vec::with_capacity(alg.len());
        for g in alg.generators() {
            let j = target.index_of(&g.name);
            if let Some(j) = j {
                let tg = target.generator(j);
                if tg.degree != g.degree || tg.invertible != g.invertible {
                    return Err(DgaError::InvalidSubstitution(format!(
                        "generator {} differs between algebras",
                        g.name
                    )));
                }
            }
            map.push(j);
        }
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = target.unit_monomial();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| DgaError::UnknownGenerator(alg.generator(i).name.clone()))?;
                t.0[j] = e;
            }
            out.insert(t, c.clone());
        }
        Ok(DgaElement::from_terms(target, out))
    }

    /// Coefficientwise change of scalars, e.g. an explicit injection of
    /// the scalar tower.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DgaElement<T> {
        DgaElement::from_terms(&self.algebra, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Replaces even generators by scalar values; their exponents become 0.
    pub fn evaluate_generators(&self, values: &[(&str, S)]) -> Result<Self, DgaError> {
        let alg = &self.algebra;
        let mut idx = Vec::with_capacity(values.len());
        for (name, v) in values {
            let i = alg
                .index_of(name)
                .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
            if alg.is_odd(i) {
                return Err(DgaError::InvalidSubstitution(format!("cannot evaluate odd generator {name}")));
            }
            idx.push((i, v));
        }
        let mut acc = Self::zero(alg);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for &(i, v) in &idx {
                let e = m.exponent(i);
                if e == 0 {
                    continue;
                }
                let base = if e < 0 {
                    v.try_inverse().ok_or(DgaError::NotInvertible)?
                } else {
                    v.clone()
                };
                for _ in 0..e.unsigned_abs() {
                    coeff = coeff.mul_ref(&base);
                }
                mono.0[i] = 0;
            }
            acc = &acc + &Self::from_terms(alg, BTreeMap::from([(mono, coeff)]));
        }
        Ok(acc)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(&self.algebra, m)
    }
}

pub(crate) fn render_monomial(alg: &Algebra, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| {
            let name = &alg.generator(i).name;
            if *e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

impl<S: Scalar> fmt::Display for DgaElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Monomial, &S)> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| (self.algebra.degree_of(m), (*m).clone()));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let (negative, body) = match c.sign_split() {
                Some((neg, abs)) => (neg, abs),
                None => (false, c.clone()),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_unit() {
                write!(f, "{}", body.coefficient_text().trim_start_matches('(').trim_end_matches(')'))?;
            } else if body.is_one_value() {
                write!(f, "{}", self.render_monomial(m))?;
            } else {
                write!(f, "{}·{}", body.coefficient_text(), self.render_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &DgaElement<S> {
    type Output = DgaElement<S>;
    fn add(self, rhs: Self) -> DgaElement<S> {
        self.checked_add(rhs).expect("operands from different algebras")
    }
}

impl<S: Scalar> Sub for &DgaElement<S> {
    type Output = DgaElement<S>;
    fn sub(self, rhs: Self) -> DgaElement<S> {
        self.checked_sub(rhs).expect("operands from different algebras")
    }
}

impl<S: Scalar> Mul for &DgaElement<S> {
    type Output = DgaElement<S>;
    fn mul(self, rhs: Self) -> DgaElement<S> {
        self.checked_mul(rhs).expect("operands from different algebras")
    }
}

impl<S: Scalar> Neg for &DgaElement<S> {
    type Output = DgaElement<S>;
    fn neg(self) -> DgaElement<S> {
        self.neg_elem()
    }
}
