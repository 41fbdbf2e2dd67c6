use std::collections::BTreeMap;
use std::sync::Arc;

use super::GeomError;
use crate::dga::{Algebra, DgaElement, DgaMatrix, Generator};
use crate::scalar::{pow, PiScalar, Rational, Scalar};

/// Name of the Bott symbol in every model algebra.
pub const BOTT: &str = "b";

/// Formal curvature of a rank-`2r` bundle split into `r` planes with Chern
/// roots `x1..xr` of form degree 2.
///
/// The ambient algebra holds the roots, the Bott symbol `b` (invertible,
/// internal degree `-2`) and any extra generators requested at
/// construction. It is truncated at `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernRootModel {
    algebra: Arc<Algebra>,
    rank: usize,
    dim: u32,
}

impl ChernRootModel {
    pub fn new(rank: usize, dim: u32) -> Result<Self, GeomError> {
        Self::with_generators(rank, dim, Vec::new(), &[])
    }

    /// Model whose algebra also contains `extra` generators with the given
    /// differentials (pairs of generator name and image text).
    pub fn with_generators(
        rank: usize,
        dim: u32,
        extra: Vec<Generator>,
        differentials: &[(&str, &str)],
    ) -> Result<Self, GeomError> {
        if !dim.is_multiple_of(2) {
            return Err(GeomError::InvalidArgument(format!("model dimension {dim} is odd")));
        }
        let mut builder = Algebra::builder(dim)
            .generators((1..=rank).map(|j| Generator::new(format!("x{j}"), 2)))
            .generator(Generator::invertible(BOTT, -2))
            .generators(extra);
        for (name, image) in differentials {
            builder = builder.differential(*name, *image);
        }
        Ok(Self {
            algebra: builder.build()?,
            rank,
            dim,
        })
    }

    /// Same roots and dimension, with more generators.
    pub fn extend(&self, extra: Vec<Generator>, differentials: &[(&str, &str)]) -> Result<Self, GeomError> {
        let existing: Vec<Generator> = self
            .algebra
            .generators()
            .iter()
            .filter(|g| !(g.name == BOTT || self.is_root_name(&g.name)))
            .cloned()
            .chain(extra)
            .collect();
        let mut diffs: Vec<(String, String)> = Vec::new();
        for g in self.algebra.generators() {
            let d = DgaElement::<Rational>::generator(&self.algebra, &g.name)?.differential();
            if !d.is_zero() {
                diffs.push((g.name.clone(), d.to_string()));
            }
        }
        diffs.extend(differentials.iter().map(|(a, b)| (a.to_string(), b.to_string())));
        let refs: Vec<(&str, &str)> = diffs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::with_generators(self.rank, self.dim, existing, &refs)
    }

    fn is_root_name(&self, name: &str) -> bool {
        name.strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .is_some_and(|j| (1..=self.rank).contains(&j))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn root_name(j: usize) -> String {
        format!("x{j}")
    }

    /// The root `x_j`, `1 <= j <= rank`.
    pub fn root<S: Scalar>(&self, j: usize) -> DgaElement<S> {
        DgaElement::generator(&self.algebra, &Self::root_name(j)).expect("root exists")
    }

    pub fn bott<S: Scalar>(&self) -> DgaElement<S> {
        DgaElement::generator(&self.algebra, BOTT).expect("Bott symbol exists")
    }

    /// Skew `2r x 2r` curvature with blocks `[[0, 2 pi x_j], [-2 pi x_j, 0]]`.
    pub fn curvature<S: PiScalar>(&self) -> DgaMatrix<S> {
        let two_pi = S::from_integer(2).mul_ref(&S::pi());
        let entries: Vec<DgaElement<S>> = (1..=self.rank).map(|j| self.root::<S>(j).scale(&two_pi)).collect();
        DgaMatrix::from_fn(&self.algebra, 2 * self.rank, |a, c| {
            let j = a / 2;
            if c / 2 != j {
                return DgaElement::zero(&self.algebra);
            }
            match (a % 2, c % 2) {
                (0, 1) => entries[j].clone(),
                (1, 0) => entries[j].neg_elem(),
                _ => DgaElement::zero(&self.algebra),
            }
        })
    }

    /// `-Tr(R^2) / (8 pi^2)`.
    pub fn p1_from_curvature<S: PiScalar>(&self) -> DgaElement<S> {
        let r = self.curvature::<S>();
        let pi_sq = S::pi().mul_ref(&S::pi());
        let scale = S::from_integer(-8).mul_ref(&pi_sq).try_inverse().expect("pi is invertible");
        r.pow(2).trace().scale(&scale)
    }

    /// `Tr(R^{2k}) / (2k (2 pi i)^{2k})`, which equals `s_k / k`.
    pub fn pontryagin_character_component<S: PiScalar>(&self, k: u32) -> Result<DgaElement<S>, GeomError> {
        if k == 0 {
            return Err(GeomError::InvalidArgument("k must be positive".into()));
        }
        if 4 * k > self.dim {
            return Ok(DgaElement::zero(&self.algebra));
        }
        let tr = self.curvature::<S>().pow(2 * k).trace();
        let denom = S::from_integer(2 * k as i64).mul_ref(&pow(&S::two_pi_i(), 2 * k));
        let inv = denom.try_inverse().expect("(2 pi i)^{2k} is invertible");
        Ok(tr.scale(&inv))
    }

    /// Power sum `s_k = sum_j x_j^{2k}` of the squared roots.
    pub fn power_sum<S: Scalar>(&self, k: u32) -> DgaElement<S> {
        (1..=self.rank).fold(DgaElement::zero(&self.algebra), |acc, j| &acc + &self.root::<S>(j).pow(2 * k))
    }

    /// Elementary symmetric polynomial `e_i` of the squared roots, i.e. the
    /// Pontryagin class `p_i`.
    pub fn pontryagin_class<S: Scalar>(&self, i: u32) -> DgaElement<S> {
        let squares: Vec<DgaElement<S>> = (1..=self.rank).map(|j| self.root::<S>(j).pow(2)).collect();
        // e_i via the generating product prod (1 + t y_j), t tracked by index
        let mut e = vec![DgaElement::one(&self.algebra)];
        for y in &squares {
            let mut next = e.clone();
            next.push(DgaElement::zero(&self.algebra));
            for k in 1..next.len() {
                next[k] = &next[k] + &(&e[k - 1] * y);
            }
            e = next;
        }
        e.get(i as usize).cloned().unwrap_or_else(|| DgaElement::zero(&self.algebra))
    }

    /// Whitney sum: the roots of `other` follow those of `self`. The
    /// dimension is the larger of the two.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, GeomError> {
        Self::new(self.rank + other.rank, self.dim.max(other.dim))
    }

    /// Moves an element of this model into `target`, renaming root `x_j` to
    /// `x_{j + offset}`; other generators keep their names.
    pub fn embed<S: Scalar>(&self, elem: &DgaElement<S>, target: &Self, offset: usize) -> Result<DgaElement<S>, GeomError> {
        let mut out = BTreeMap::new();
        for (m, c) in elem.terms() {
            let mut t = target.algebra.unit_monomial();
            let mut factors = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.algebra.generator(i).name;
                let new_name = match name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    Some(j) if self.is_root_name(name) => Self::root_name(j + offset),
                    _ => name.clone(),
                };
                factors.push((new_name, e));
            }
            let refs: Vec<(&str, i32)> = factors.iter().map(|(n, e)| (n.as_str(), *e)).collect();
            t = if refs.is_empty() { t } else { target.algebra.monomial(&refs)? };
            out.insert(t, c.clone());
        }
        Ok(DgaElement::from_terms(&target.algebra, out))
    }
}
