use std::collections::BTreeMap;
use std::sync::Arc;

use smallvec::SmallVec;

use super::element::DgaElement;
use super::text::parse_element;
use super::DgaError;
use crate::scalar::{Rational, Scalar};

/// Exponent vector indexed by generator position (generators are kept in
/// name order, so the derived `Ord` is lexicographic on names).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub(crate) SmallVec<[i32; 8]>);

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Self(SmallVec::from_elem(0, len))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> i32 {
        self.0[i]
    }

    pub(crate) fn set_exponent(&mut self, i: usize, e: i32) {
        self.0[i] = e;
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }
}

/// One generator of a graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Differential-form degree; parity is this degree mod 2.
    pub degree: u32,
    /// Degree on a separate grading axis (the Bott symbol has `-2`).
    pub internal_degree: i32,
    /// Modular weight carried by the symbol.
    pub weight: i32,
    /// Invertible generators may carry negative exponents.
    pub invertible: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            internal_degree: 0,
            weight: 0,
            invertible: false,
        }
    }

    /// Invertible even symbol of form degree 0 living on the internal axis.
    pub fn invertible(name: impl Into<String>, internal_degree: i32) -> Self {
        Self {
            name: name.into(),
            degree: 0,
            internal_degree,
            weight: 0,
            invertible: true,
        }
    }

    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Finitely generated graded-commutative algebra with a differential,
/// truncated above form degree `truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    generators: Vec<Generator>,
    truncation: u32,
    degrees: Vec<u32>,
    odd: Vec<bool>,
    differentials: Vec<Vec<(Monomial, Rational)>>,
}

impl Algebra {
    pub fn builder(truncation: u32) -> AlgebraBuilder {
        AlgebraBuilder {
            truncation,
            generators: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub(crate) fn differential_terms(&self, i: usize) -> &[(Monomial, Rational)] {
        &self.differentials[i]
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial::unit(self.generators.len())
    }

    /// Form degree of a monomial.
    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.degrees)
            .map(|(e, d)| (*e).max(0) as u32 * d)
            .sum()
    }

    pub fn internal_degree_of(&self, m: &Monomial) -> i32 {
        m.0.iter().zip(&self.generators).map(|(e, g)| e * g.internal_degree).sum()
    }

    pub fn weight_of(&self, m: &Monomial) -> i32 {
        m.0.iter().zip(&self.generators).map(|(e, g)| e * g.weight).sum()
    }

    pub fn is_odd_monomial(&self, m: &Monomial) -> bool {
        self.degree_of(m) % 2 == 1
    }

    /// Product of two monomials in canonical order: `None` when it vanishes
    /// (repeated odd generator or degree above the truncation), otherwise
    /// the product and whether the Koszul sign is negative.
    pub(crate) fn mul_monomials(&self, a: &Monomial, b: &Monomial, deg_a: u32, deg_b: u32) -> Option<(Monomial, bool)> {
        if deg_a + deg_b > self.truncation {
            return None;
        }
        let mut negative = false;
        let mut odd_in_a_after = 0u32;
        for i in (0..self.generators.len()).rev() {
            if self.odd[i] {
                if b.0[i] != 0 {
                    if a.0[i] != 0 {
                        return None;
                    }
                    if odd_in_a_after % 2 == 1 {
                        negative = !negative;
                    }
                }
                if a.0[i] != 0 {
                    odd_in_a_after += 1;
                }
            }
        }
        let exps = a.0.iter().zip(b.0.iter()).map(|(x, y)| x + y).collect();
        Some((Monomial(exps), negative))
    }

    /// Monomial given as `(name, exponent)` pairs.
    pub fn monomial(&self, factors: &[(&str, i32)]) -> Result<Monomial, DgaError> {
        let mut m = self.unit_monomial();
        for (name, e) in factors {
            let i = self
                .index_of(name)
                .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
            m.0[i] += e;
        }
        self.validate_monomial(&m)?;
        Ok(m)
    }

    pub(crate) fn validate_monomial(&self, m: &Monomial) -> Result<(), DgaError> {
        for (i, e) in m.0.iter().enumerate() {
            let g = &self.generators[i];
            if *e < 0 && !g.invertible {
                return Err(DgaError::NegativeExponent(g.name.clone()));
            }
            if self.odd[i] && *e > 1 {
                return Err(DgaError::OddSquare(g.name.clone()));
            }
        }
        Ok(())
    }
}

pub struct AlgebraBuilder {
    truncation: u32,
    generators: Vec<Generator>,
    differentials: Vec<(String, String)>,
}

impl AlgebraBuilder {
    pub fn generator(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }

    pub fn generators(mut self, gs: impl IntoIterator<Item = Generator>) -> Self {
        self.generators.extend(gs);
        self
    }

    /// Sets `d(name)` to an element written in the canonical text form,
    /// e.g. `"p1"` or `"x1^2 + x2^2"`. Unlisted generators are closed.
    pub fn differential(mut self, name: impl Into<String>, image: impl Into<String>) -> Self {
        self.differentials.push((name.into(), image.into()));
        self
    }

    pub fn build(self) -> Result<Arc<Algebra>, DgaError> {
        let mut generators = self.generators;
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        for w in generators.windows(2) {
            if w[0].name == w[1].name {
                return Err(DgaError::DuplicateGenerator(w[0].name.clone()));
            }
        }
        for g in &generators {
            if g.invertible && g.degree != 0 {
                return Err(DgaError::InvalidGenerator(format!(
                    "invertible generator {} must have form degree 0",
                    g.name
                )));
            }
            if g.name.is_empty() || !g.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                return Err(DgaError::InvalidGenerator(format!("bad generator name {:?}", g.name)));
            }
        }
        let n = generators.len();
        let mut algebra = Algebra {
            degrees: generators.iter().map(|g| g.degree).collect(),
            odd: generators.iter().map(|g| g.is_odd()).collect(),
            generators,
            truncation: self.truncation,
            differentials: vec![Vec::new(); n],
        };
        let bare = Arc::new(algebra.clone());
        for (name, image) in &self.differentials {
            let i = bare
                .index_of(name)
                .ok_or_else(|| DgaError::UnknownGenerator(name.clone()))?;
            let g = bare.generator(i);
            let elem = parse_element(&bare, image)?;
            if g.invertible && !elem.is_zero() {
                return Err(DgaError::InvalidGenerator(format!("invertible generator {name} must be closed")));
            }
            for (m, _) in elem.terms() {
                if bare.degree_of(m) != g.degree + 1 {
                    return Err(DgaError::DegreeMismatch {
                        generator: name.clone(),
                        expected: g.degree + 1,
                        found: bare.degree_of(m),
                    });
                }
            }
            algebra.differentials[i] = elem.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        }
        let algebra = Arc::new(algebra);
        for i in 0..n {
            let g: DgaElement<Rational> = DgaElement::from_terms(
                &algebra,
                BTreeMap::from([(Self::single(n, i), <Rational as Scalar>::one_value())]),
            );
            if !g.differential().differential().is_zero() {
                return Err(DgaError::DSquaredNonzero(algebra.generator(i).name.clone()));
            }
        }
        Ok(algebra)
    }

    fn single(n: usize, i: usize) -> Monomial {
        let mut m = Monomial::unit(n);
        m.0[i] = 1;
        m
    }
}
