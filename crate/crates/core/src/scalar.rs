//! Coefficient rings for differential graded algebra elements.
//!
//! The tower is `Rational -> GaussianPi -> ComplexFloat` plus
//! `Rational -> QSeries`. Every injection is an explicit `From` impl or an
//! explicit method; nothing converts implicitly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Exact Gaussian rational `a + b i` with `a, b` rational.
pub type GaussianRational = Complex<BigRational>;

/// Floating-point complex scalar.
pub type ComplexFloat = Complex64;

/// Ring operations required of a coefficient type.
///
/// Methods take references so that big-number scalars are never moved or
/// cloned needlessly inside hot product loops.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn is_zero_value(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    fn is_one_value(&self) -> bool {
        *self == Self::one_value()
    }

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// `(is_negative, |self|)` for scalars with a natural sign; used when
    /// rendering sums as `a - b` instead of `a + (-b)`.
    fn sign_split(&self) -> Option<(bool, Self)> {
        None
    }

    /// Display form as a coefficient: bare when atomic, parenthesized otherwise.
    fn coefficient_text(&self) -> String {
        format!("({self})")
    }
}

/// Scalars that contain `pi` and `i`, needed wherever curvature or mode
/// eigenvalues `2 pi i (n tau - m)` appear.
pub trait PiScalar: Scalar {
    fn pi() -> Self;
    fn imaginary_unit() -> Self;
    fn from_gaussian(z: &GaussianRational) -> Self;
    /// Floating-point value, with `pi` substituted numerically.
    fn approx(&self) -> ComplexFloat;

    fn two_pi_i() -> Self {
        Self::from_integer(2).mul_ref(&Self::pi()).mul_ref(&Self::imaginary_unit())
    }
}

/// `x^n` by repeated multiplication.
pub fn pow<S: Scalar>(x: &S, n: u32) -> S {
    (0..n).fold(S::one_value(), |acc, _| acc.mul_ref(x))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator and denominator individually overflow f64; scale both
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn gaussian_to_complex(z: &GaussianRational) -> ComplexFloat {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

fn gaussian_inverse(z: &GaussianRational) -> Option<GaussianRational> {
    let norm = &z.re * &z.re + &z.im * &z.im;
    if norm.is_zero() {
        return None;
    }
    Some(Complex::new(&z.re / &norm, -&z.im / &norm))
}

fn fmt_gaussian(z: &GaussianRational) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => {
            if z.im.is_one() {
                "i".to_string()
            } else if (-&z.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", z.im)
            }
        }
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", z.re, sign, z.im.abs())
        }
    }
}

impl Scalar for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn one_value() -> Self {
        One::one()
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn sign_split(&self) -> Option<(bool, Self)> {
        Some((self.is_negative(), self.abs()))
    }
    fn coefficient_text(&self) -> String {
        if self.is_integer() && !self.is_negative() {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

/// Element of the Laurent polynomial ring `Q(i)[pi, 1/pi]`.
///
/// Keys are powers of `pi`; values are nonzero Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussianPi {
    terms: BTreeMap<i32, GaussianRational>,
}

impl GaussianPi {
    pub fn monomial(coefficient: GaussianRational, pi_power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(pi_power, coefficient);
        }
        Self { terms }
    }

    pub fn from_gaussian_rational(z: GaussianRational) -> Self {
        Self::monomial(z, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussianRational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// The rational value, if `self` has no `pi` dependence and no imaginary part.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (power, c) = self.terms.iter().next()?;
                (*power == 0 && c.im.is_zero()).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    pub fn to_complex(&self) -> ComplexFloat {
        self.terms
            .iter()
            .map(|(p, c)| gaussian_to_complex(c) * std::f64::consts::PI.powi(*p))
            .sum()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = <Self as Scalar>::one_value();
        for _ in 0..exp {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl fmt::Display for GaussianPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| match p {
                0 => fmt_gaussian(c),
                1 => format!("({})*pi", fmt_gaussian(c)),
                _ => format!("({})*pi^{}", fmt_gaussian(c), p),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Scalar for GaussianPi {
    fn zero_value() -> Self {
        Self::default()
    }
    fn one_value() -> Self {
        Self::monomial(Complex::new(One::one(), Zero::zero()), 0)
    }
    fn is_zero_value(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (p, c) in &rhs.terms {
            let entry = terms.entry(*p).or_insert_with(Complex::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                terms.remove(p);
            }
        }
        Self { terms }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut terms: BTreeMap<i32, GaussianRational> = BTreeMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                let entry = terms.entry(p + q).or_insert_with(Complex::zero);
                *entry = &*entry + a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }
    fn neg_ref(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::monomial(Complex::new(q.clone(), Zero::zero()), 0)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (p, c) = self.terms.iter().next()?;
        Some(Self::monomial(gaussian_inverse(c)?, -p))
    }
    fn sign_split(&self) -> Option<(bool, Self)> {
        let q = self.to_rational()?;
        Some((q.is_negative(), Self::from_rational(&q.abs())))
    }
    fn coefficient_text(&self) -> String {
        match self.to_rational() {
            Some(q) => q.coefficient_text(),
            None => format!("({self})"),
        }
    }
}

impl PiScalar for GaussianPi {
    fn pi() -> Self {
        Self::monomial(Complex::new(One::one(), Zero::zero()), 1)
    }
    fn imaginary_unit() -> Self {
        Self::monomial(Complex::new(Zero::zero(), One::one()), 0)
    }
    fn from_gaussian(z: &GaussianRational) -> Self {
        Self::monomial(z.clone(), 0)
    }
    fn approx(&self) -> ComplexFloat {
        self.to_complex()
    }
}

impl From<Rational> for GaussianPi {
    fn from(q: Rational) -> Self {
        <Self as Scalar>::from_rational(&q)
    }
}

impl From<&GaussianPi> for ComplexFloat {
    fn from(z: &GaussianPi) -> Self {
        z.to_complex()
    }
}

impl Scalar for ComplexFloat {
    fn zero_value() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_value() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn try_inverse(&self) -> Option<Self> {
        if Scalar::is_zero_value(self) {
            None
        } else {
            Some(self.inv())
        }
    }
}

impl PiScalar for ComplexFloat {
    fn pi() -> Self {
        Complex64::new(std::f64::consts::PI, 0.0)
    }
    fn imaginary_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_gaussian(z: &GaussianRational) -> Self {
        gaussian_to_complex(z)
    }
    fn approx(&self) -> ComplexFloat {
        *self
    }
}
