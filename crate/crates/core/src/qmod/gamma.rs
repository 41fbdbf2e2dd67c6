use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{check_upper_half_plane, eisenstein_lattice, OrderingKind};
use super::QmodError;

/// An element `[[a, b], [c, d]]` of `SL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GammaElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, QmodError> {
        if a * d - b * c != 1 {
            return Err(QmodError::InvalidArgument(format!(
                "[[{a}, {b}], [{c}, {d}]] has determinant {} (expected 1)",
                a * d - b * c
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    /// `tau -> tau + 1`
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    /// `tau -> -1/tau`
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Automorphy factor `c tau + d`.
    pub fn automorphy(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }

    /// `(a tau + b) / (c tau + d)`.
    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / self.automorphy(tau)
    }
}

impl Mul for GammaElement {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        Self {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `E(gamma tau) - [(c tau + d)^{2k} E(tau) + anomaly]` where the anomaly is
/// `-2 pi i c (c tau + d)` for weight 2 and zero otherwise.
///
/// Weight 2 is summed in the holomorphic row-major order, higher weights
/// over square shells; both at half-width `bound`.
pub fn transform_residual(k: u32, gamma: GammaElement, tau: Complex64, bound: u64) -> Result<Complex64, QmodError> {
    if k == 0 {
        return Err(QmodError::InvalidArgument("k must be positive".into()));
    }
    check_upper_half_plane(tau)?;
    let ordering = OrderingKind::default_for(k).with_bound(bound);
    let moved = gamma.apply(tau);
    let lhs = eisenstein_lattice(k, moved, &ordering)?;
    let base = eisenstein_lattice(k, tau, &ordering)?;
    let j = gamma.automorphy(tau);
    let mut expected = j.powu(2 * k) * base;
    if k == 1 {
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        expected -= two_pi_i * gamma.c as f64 * j;
    }
    Ok(lhs - expected)
}
