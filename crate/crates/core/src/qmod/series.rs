//! Truncated Laurent series in `q` with exact rational coefficients and a
//! modular weight tag.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::QmodError;
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Order marker for series that are exact (finite polynomials in `q`).
pub const EXACT_ORDER: i64 = i64::MAX;

fn shift_order(order: i64, by: i64) -> i64 {
    if order == EXACT_ORDER {
        EXACT_ORDER
    } else {
        order + by
    }
}

/// `sum_{n >= min_exp} c_n q^n + O(q^order)`, weight-tagged.
///
/// Leading zeros are trimmed, so a nonzero series has a nonzero first
/// coefficient. The zero series has no coefficients and adopts the weight
/// of whatever it is added to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    weight: i32,
    min_exp: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl QSeries {
    pub fn new(weight: i32, min_exp: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        let mut s = Self {
            weight,
            min_exp,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    /// Series from integer coefficients starting at `q^0`.
    pub fn from_integers(weight: i32, coeffs: &[i64], order: i64) -> Self {
        Self::new(
            weight,
            0,
            coeffs.iter().map(|c| Rational::from_integer(BigInt::from(*c))).collect(),
            order,
        )
    }

    pub fn constant(weight: i32, c: Rational) -> Self {
        Self::new(weight, 0, vec![c], EXACT_ORDER)
    }

    pub fn zero_with(weight: i32, order: i64) -> Self {
        Self::new(weight, 0, Vec::new(), order)
    }

    fn normalize(&mut self) {
        // drop anything at or beyond the truncation order
        if self.order != EXACT_ORDER {
            let keep = (self.order - self.min_exp).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        self.coeffs.drain(..lead);
        self.min_exp += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT_ORDER
    }

    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = weight;
        self
    }

    /// Lowers the truncation order (never raises it).
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.weight, self.min_exp, self.coeffs.clone(), self.order.min(order))
    }

    /// Coefficient of `q^n`; zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Rational {
        if n < self.min_exp {
            return Rational::zero();
        }
        self.coeffs
            .get((n - self.min_exp) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `(exponent, coefficient)` pairs of the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.min_exp + i as i64, c))
    }

    /// True for weakly holomorphic series with a pole at the cusp.
    pub fn has_pole(&self) -> bool {
        !self.coeffs.is_empty() && self.min_exp < 0
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, QmodError> {
        let weight = match (self.coeffs.is_empty(), rhs.coeffs.is_empty()) {
            (true, _) => rhs.weight,
            (false, true) => self.weight,
            (false, false) if self.weight == rhs.weight => self.weight,
            _ => {
                return Err(QmodError::WeightMismatch {
                    left: self.weight,
                    right: rhs.weight,
                })
            }
        };
        let order = self.order.min(rhs.order);
        if self.coeffs.is_empty() {
            return Ok(Self::new(weight, rhs.min_exp, rhs.coeffs.clone(), order));
        }
        if rhs.coeffs.is_empty() {
            return Ok(Self::new(weight, self.min_exp, self.coeffs.clone(), order));
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = (self.min_exp + self.coeffs.len() as i64).max(rhs.min_exp + rhs.coeffs.len() as i64);
        let coeffs = (lo..hi).map(|n| self.coeff(n) + rhs.coeff(n)).collect();
        Ok(Self::new(weight, lo, coeffs, order))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.weight,
            self.min_exp,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.order,
        )
    }

    fn valuation_for_order(&self) -> i64 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.min_exp.min(0)
        }
    }

    /// Product; weights add and the order is the smallest order that is
    /// still fully determined by the operands.
    pub fn mul_series(&self, rhs: &Self) -> Self {
        let order = shift_order(self.order, rhs.valuation_for_order())
            .min(shift_order(rhs.order, self.valuation_for_order()));
        let weight = self.weight + rhs.weight;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero_with(weight, order);
        }
        let min_exp = self.min_exp + rhs.min_exp;
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if order != EXACT_ORDER {
            len = len.min((order - min_exp).max(0) as usize);
        }
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(weight, min_exp, coeffs, order)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(0, Rational::one());
        for _ in 0..n {
            acc = acc.mul_series(self);
        }
        acc
    }

    /// Multiplicative inverse of a series with a nonzero leading term.
    pub fn inverse(&self) -> Option<Self> {
        let lead = self.coeffs.first()?;
        let a = self.min_exp;
        let order = shift_order(self.order, -2 * a);
        // u = q^{-a} self = lead (1 + ...), invert term by term
        let n = if order == EXACT_ORDER {
            if self.coeffs.len() == 1 {
                1
            } else {
                return None;
            }
        } else {
            (order + a).max(0) as usize
        };
        let inv_lead = lead.recip();
        let mut out = vec![Rational::zero(); n];
        for k in 0..n {
            let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc -= &self.coeffs[j] * &out[k - j];
            }
            out[k] = acc * &inv_lead;
        }
        Some(Self::new(-self.weight, -a, out, order))
    }

    /// Numeric value at a complex `q` with `|q| < 1`.
    pub fn evaluate(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.terms() {
            acc += q.powi(n as i32) * rational_to_f64(c);
        }
        acc
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            weight: self.weight,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            order: self.order,
        }
    }

    pub fn from_record(record: &SeriesRecord) -> Result<Self, QmodError> {
        let coeffs = record
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(record.weight, record.min_exp, coeffs, record.order))
    }
}

/// Structured-text form of a series; coefficients are `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub weight: i32,
    pub min_exp: i64,
    pub coeffs: Vec<String>,
    pub order: i64,
}

pub fn parse_rational(s: &str) -> Result<Rational, QmodError> {
    let s = s.trim();
    let bad = || QmodError::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            match (n, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "{var}")?,
                _ => write!(f, "{abs} {var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Scalar for QSeries {
    fn zero_value() -> Self {
        Self::zero_with(0, EXACT_ORDER)
    }
    fn one_value() -> Self {
        Self::constant(0, Rational::one())
    }
    fn is_zero_value(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        // mixed-weight sums only arise from a bookkeeping bug upstream
        self.checked_add(rhs).expect("QSeries addition across weights")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_series(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(0, q.clone())
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

impl From<Rational> for QSeries {
    fn from(q: Rational) -> Self {
        Self::constant(0, q)
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b[m] = -acc / Rational::from_integer(BigInt::from(m + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().unwrap_or_else(Rational::one)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `sigma_p(n) = sum of d^p over divisors d of n`.
pub fn divisor_sigma(p: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    acc
}

/// Eisenstein series of weight `2k` normalized to constant term 1:
/// `1 - (4k / B_2k) sum sigma_{2k-1}(n) q^n`, coefficients below `q^order`.
pub fn eisenstein_q(k: u32, order: i64) -> Result<QSeries, QmodError> {
    if k == 0 {
        return Err(QmodError::InvalidArgument("k must be positive".into()));
    }
    if order < 1 {
        return Err(QmodError::InvalidArgument("order must be positive".into()));
    }
    let b = bernoulli(2 * k as usize);
    let factor = -Rational::from_integer(BigInt::from(4 * k)) / b;
    let mut coeffs = Vec::with_capacity(order as usize);
    coeffs.push(Rational::one());
    for n in 1..order {
        coeffs.push(&factor * Rational::from_integer(divisor_sigma(2 * k - 1, n as u64)));
    }
    Ok(QSeries::new(2 * k as i32, 0, coeffs, order))
}

/// `-B_2k / (2k)!`: the factor relating the lattice sum divided by
/// `(2 pi i)^{2k}` to the constant-term-1 series.
pub fn hat_factor(k: u32) -> Rational {
    let b = bernoulli(2 * k as usize);
    -b / Rational::from_integer(factorial(2 * k as u64))
}

/// Lattice-normalized Eisenstein series `E_2k^lat / (2 pi i)^{2k}`,
/// which has rational q-coefficients.
pub fn eisenstein_hat(k: u32, order: i64) -> Result<QSeries, QmodError> {
    Ok(eisenstein_q(k, order)?.scale(&hat_factor(k)))
}

/// `2 zeta(2k)` in floating point, for comparing lattice sums with series.
pub fn two_zeta_even(k: u32) -> f64 {
    // 2 zeta(2k) = (-1)^{k+1} B_2k (2 pi)^{2k} / (2k)!
    let b = bernoulli(2 * k as usize);
    let ratio = rational_to_f64(&(b.abs() / Rational::from_integer(factorial(2 * k as u64))));
    ratio * (2.0 * std::f64::consts::PI).powi(2 * k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], rational(-1, 2));
        assert_eq!(b[2], rational(1, 6));
        assert_eq!(b[3], rational(0, 1));
        assert_eq!(b[4], rational(-1, 30));
        assert_eq!(b[6], rational(1, 42));
        assert_eq!(b[8], rational(-1, 30));
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_sigma(1, 2), BigInt::from(3));
        assert_eq!(divisor_sigma(3, 2), BigInt::from(9));
        assert_eq!(divisor_sigma(3, 3), BigInt::from(28));
        assert_eq!(divisor_sigma(1, 12), BigInt::from(28));
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein_q(1, 3).unwrap(), QSeries::from_integers(2, &[1, -24, -72], 3));
        assert_eq!(
            eisenstein_q(2, 4).unwrap(),
            QSeries::from_integers(4, &[1, 240, 2160, 6720], 4)
        );
        assert_eq!(eisenstein_q(3, 2).unwrap(), QSeries::from_integers(6, &[1, -504], 2));
    }

    #[test]
    fn eisenstein_rejects_bad_arguments() {
        assert!(matches!(eisenstein_q(0, 3), Err(QmodError::InvalidArgument(_))));
        assert!(matches!(eisenstein_q(2, 0), Err(QmodError::InvalidArgument(_))));
    }

    #[test]
    fn hat_normalization() {
        assert_eq!(hat_factor(1), rational(-1, 12));
        assert_eq!(hat_factor(2), rational(1, 720));
        assert_eq!(hat_factor(3), rational(-1, 30240));
    }

    #[test]
    fn weight_and_order_under_products() {
        let e4 = eisenstein_q(2, 6).unwrap();
        let e6 = eisenstein_q(3, 4).unwrap();
        let p = e4.mul_series(&e6);
        assert_eq!(p.weight(), 10);
        assert_eq!(p.order(), 4);
        assert_eq!(p.coeff(0), Rational::one());
        // E4 E6 = E10 = 1 - 264 q - ...
        assert_eq!(p.coeff(1), rational(-264, 1));
    }

    #[test]
    fn negative_valuation_shrinks_order() {
        let pole = QSeries::new(0, -1, vec![Rational::one()], EXACT_ORDER);
        let e4 = eisenstein_q(2, 5).unwrap();
        let p = pole.mul_series(&e4);
        assert_eq!(p.min_exp(), -1);
        assert_eq!(p.order(), 4);
        assert!(p.has_pole());
    }

    #[test]
    fn inverse_roundtrip() {
        let e4 = eisenstein_q(2, 8).unwrap();
        let inv = e4.inverse().unwrap();
        assert_eq!(inv.weight(), -4);
        let one = e4.mul_series(&inv);
        assert_eq!(one, QSeries::new(0, 0, vec![Rational::one()], 8));
    }

    #[test]
    fn mixed_weight_sum_is_an_error() {
        let e4 = eisenstein_q(2, 3).unwrap();
        let e6 = eisenstein_q(3, 3).unwrap();
        assert!(matches!(e4.checked_add(&e6), Err(QmodError::WeightMismatch { .. })));
        // zero adopts the partner's weight
        let z = QSeries::zero_with(0, 10);
        assert_eq!(z.checked_add(&e6).unwrap().weight(), 6);
    }

    #[test]
    fn display_matches_table_format() {
        let e4 = eisenstein_q(2, 3).unwrap();
        assert_eq!(e4.to_string(), "1 + 240 q + 2160 q^2");
        let e2 = eisenstein_q(1, 3).unwrap();
        assert_eq!(e2.to_string(), "1 - 24 q - 72 q^2");
        assert_eq!(QSeries::zero_with(4, 3).to_string(), "0");
    }

    #[test]
    fn record_roundtrip() {
        let s = eisenstein_hat(1, 5).unwrap();
        let rec = s.to_record();
        assert_eq!(rec.coeffs[0], "-1/12");
        let json = serde_json::to_string(&rec).unwrap();
        let back: SeriesRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(QSeries::from_record(&back).unwrap(), s);
    }
}
