use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GeomError;
use crate::dga::DgaElement;
use crate::qmod::parse_rational;
use crate::scalar::{Rational, Scalar};

/// Integer partition in decreasing order, written `"2,1,1"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, GeomError> {
        if parts.contains(&0) {
            return Err(GeomError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn single(i: u32) -> Self {
        Self(vec![i])
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all_of(n: u32) -> Vec<Self> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for part in (1..=max.min(n)).rev() {
                prefix.push(part);
                rec(n - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| GeomError::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(parts)
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorRecord {
    dim: u32,
    #[serde(default)]
    pontryagin_numbers: BTreeMap<String, String>,
}

/// Dimension plus the Pontryagin numbers `∫ p_lambda` of a closed manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    dim: u32,
    numbers: BTreeMap<Partition, Rational>,
}

impl ManifoldDescriptor {
    pub fn new(dim: u32, numbers: impl IntoIterator<Item = (Partition, Rational)>) -> Result<Self, GeomError> {
        if !dim.is_multiple_of(4) {
            return Err(GeomError::InvalidArgument(format!("dimension {dim} is not divisible by 4")));
        }
        let mut map = BTreeMap::new();
        for (p, c) in numbers {
            if p.size() != dim / 4 {
                return Err(GeomError::InvalidPartition(format!("{p} is not a partition of {}", dim / 4)));
            }
            if map.insert(p.clone(), c).is_some() {
                return Err(GeomError::InvalidPartition(format!("{p} listed twice")));
            }
        }
        Ok(Self { dim, numbers: map })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn numbers(&self) -> &BTreeMap<Partition, Rational> {
        &self.numbers
    }

    pub fn number(&self, p: &Partition) -> Option<&Rational> {
        self.numbers.get(p)
    }

    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        let rec: DescriptorRecord = serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))?;
        let mut numbers = Vec::new();
        for (k, v) in rec.pontryagin_numbers {
            let q = parse_rational(&v).map_err(|e| GeomError::Parse(e.to_string()))?;
            numbers.push((k.parse()?, q));
        }
        Self::new(rec.dim, numbers)
    }

    pub fn to_json(&self) -> String {
        let rec = DescriptorRecord {
            dim: self.dim,
            pontryagin_numbers: self.numbers.iter().map(|(p, c)| (p.to_string(), c.to_string())).collect(),
        };
        serde_json::to_string(&rec).expect("descriptor serializes")
    }

    /// True when every stored number of a monomial containing `p1` is zero.
    pub fn p1_numbers_vanish(&self) -> bool {
        self.numbers
            .iter()
            .all(|(p, c)| !p.parts().contains(&1) || num_traits::Zero::is_zero(c))
    }

    /// Pontryagin numbers of the product manifold, from the rational
    /// Whitney formula `p(X x Y) = p(X) p(Y)`. Products missing a needed
    /// number of either factor are reported as `MissingNumber`.
    pub fn product(&self, other: &Self) -> Result<Self, GeomError> {
        let n = (self.dim + other.dim) / 4;
        let mut numbers = Vec::new();
        for lambda in Partition::all_of(n) {
            // expand prod_i sum_{a+b=lambda_i} p_a(X) p_b(Y)
            let mut terms: BTreeMap<(Partition, Partition), Rational> =
                BTreeMap::from([((Partition::empty(), Partition::empty()), Rational::from_integer(1.into()))]);
            for &part in lambda.parts() {
                let mut next = BTreeMap::new();
                for ((px, py), c) in &terms {
                    for a in 0..=part {
                        let b = part - a;
                        let nx = if a > 0 { px.union(&Partition::single(a)) } else { px.clone() };
                        let ny = if b > 0 { py.union(&Partition::single(b)) } else { py.clone() };
                        *next.entry((nx, ny)).or_insert_with(|| Rational::from_integer(0.into())) += c;
                    }
                }
                terms = next;
            }
            let mut total = Rational::from_integer(0.into());
            for ((px, py), c) in terms {
                if px.size() * 4 != self.dim {
                    continue;
                }
                let x = lookup(self, &px)?;
                let y = lookup(other, &py)?;
                total += c * x * y;
            }
            numbers.push((lambda, total));
        }
        Self::new(self.dim + other.dim, numbers)
    }
}

fn lookup(d: &ManifoldDescriptor, p: &Partition) -> Result<Rational, GeomError> {
    if d.dim == 0 && p.parts().is_empty() {
        return Ok(Rational::from_integer(1.into()));
    }
    d.number(p).cloned().ok_or_else(|| GeomError::MissingNumber(p.to_string()))
}

/// Pontryagin index of a generator named `p<i>` of form degree `4i`.
fn pontryagin_index(name: &str, degree: u32) -> Option<u32> {
    let i: u32 = name.strip_prefix('p')?.parse().ok()?;
    (i > 0 && degree == 4 * i).then_some(i)
}

/// Integrates the top-degree part of `cls` against the stored numbers,
/// leaving any form-degree-0 symbols (Bott symbol, Eisenstein symbols)
/// in place.
pub fn integrate_symbolic<S: Scalar>(descriptor: &ManifoldDescriptor, cls: &DgaElement<S>) -> Result<DgaElement<S>, GeomError> {
    let alg = cls.algebra();
    let mut acc = DgaElement::zero(alg);
    for (m, c) in cls.component(descriptor.dim).terms() {
        let mut parts = Vec::new();
        let mut rest = m.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let g = alg.generator(i);
            match pontryagin_index(&g.name, g.degree) {
                Some(k) => {
                    parts.extend(std::iter::repeat_n(k, e as usize));
                    rest = replace_exponent(rest, i);
                }
                None if g.degree == 0 => {}
                None => return Err(GeomError::NotPontryagin(cls.render_monomial(m))),
            }
        }
        let p = Partition::new(parts)?;
        let number = if descriptor.dim == 0 {
            Rational::from_integer(1.into())
        } else {
            descriptor
                .number(&p)
                .cloned()
                .ok_or_else(|| GeomError::MissingNumber(p.to_string()))?
        };
        let term = DgaElement::from_terms(alg, BTreeMap::from([(rest, c.mul_ref(&S::from_rational(&number)))]));
        acc = &acc + &term;
    }
    Ok(acc)
}

fn replace_exponent(mut m: crate::dga::Monomial, i: usize) -> crate::dga::Monomial {
    m.set_exponent(i, 0);
    m
}

/// Integrates a class written purely in Pontryagin generators to a scalar.
pub fn integrate<S: Scalar>(descriptor: &ManifoldDescriptor, cls: &DgaElement<S>) -> Result<S, GeomError> {
    let reduced = integrate_symbolic(descriptor, cls)?;
    let mut total = S::zero_value();
    for (m, c) in reduced.terms() {
        if !m.is_unit() {
            return Err(GeomError::NotPontryagin(reduced.render_monomial(m)));
        }
        total = total.add_ref(c);
    }
    Ok(total)
}
