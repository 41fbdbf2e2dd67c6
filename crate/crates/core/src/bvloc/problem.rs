use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::BvlocError;
use crate::dga::{parse_element, Algebra, DgaElement, Generator};
use crate::qmod::parse_rational;
use crate::scalar::{rational_to_f64, Rational};

fn z_algebra() -> &'static Arc<Algebra> {
    static ALG: OnceLock<Arc<Algebra>> = OnceLock::new();
    ALG.get_or_init(|| Algebra::builder(0).generator(Generator::new("z", 0)).build().expect("one even generator"))
}

/// Polynomial in `z` with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPolynomial {
    element: DgaElement<Rational>,
}

impl ZPolynomial {
    pub fn parse(text: &str) -> Result<Self, BvlocError> {
        let element = parse_element(z_algebra(), text).map_err(|e| BvlocError::Parse(e.to_string()))?;
        Ok(Self { element })
    }

    pub fn zero() -> Self {
        Self {
            element: DgaElement::zero(z_algebra()),
        }
    }

    /// `(exponent, coefficient)` pairs.
    pub fn coefficients(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.element.terms().map(|(m, c)| (m.exponent(0), c))
    }

    pub fn derivative(&self) -> Self {
        let alg = z_algebra();
        let mut out = DgaElement::zero(alg);
        for (e, c) in self.coefficients() {
            if e != 0 {
                let term = DgaElement::monomial(alg, &[("z", e - 1)], c * Rational::from_integer(e.into()))
                    .expect("nonnegative exponent");
                out = &out + &term;
            }
        }
        Self { element: out }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            element: self.element.scale(c),
        }
    }

    pub fn evaluate(&self, z: f64) -> f64 {
        self.coefficients().map(|(e, c)| rational_to_f64(c) * z.powi(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.element)
    }
}

/// An equivariant form `alpha0 + g dz ^ dphi` on the sphere, optionally
/// replaced by its exponential `exp(t alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantSurfaceProblem {
    pub alpha0: ZPolynomial,
    pub g: ZPolynomial,
    /// Rotation speed.
    pub s: Rational,
    /// Nodes per direction of the tensor-product rule.
    pub grid: usize,
    /// When present, the form is `exp(t alpha) = e^{t alpha0} (1 + t g dz ^ dphi)`.
    pub t: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRecord {
    alpha0: String,
    g: String,
    s: serde_json::Value,
    grid: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<serde_json::Value>,
}

fn rational_field(v: &serde_json::Value) -> Result<Rational, BvlocError> {
    let text = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
        serde_json::Value::Number(n) => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            return Rational::from_float(x).ok_or_else(|| BvlocError::Parse(format!("bad number {n}")));
        }
        other => return Err(BvlocError::Parse(format!("expected a rational, found {other}"))),
    };
    parse_rational(&text).map_err(|e| BvlocError::Parse(e.to_string()))
}

impl EquivariantSurfaceProblem {
    pub fn new(alpha0: &str, g: &str, s: Rational, grid: usize) -> Result<Self, BvlocError> {
        Ok(Self {
            alpha0: ZPolynomial::parse(alpha0)?,
            g: ZPolynomial::parse(g)?,
            s,
            grid,
            t: None,
        })
    }

    /// The problem with `g = -alpha0' / s`, which is closed by construction.
    pub fn closed(alpha0: &str, s: Rational, grid: usize) -> Result<Self, BvlocError> {
        if s.is_zero() {
            return Err(BvlocError::FixedPointDegenerate);
        }
        let alpha0 = ZPolynomial::parse(alpha0)?;
        let g = alpha0.derivative().scale(&(-s.recip()));
        Ok(Self {
            alpha0,
            g,
            s,
            grid,
            t: None,
        })
    }

    pub fn exponential(&self, t: Rational) -> Self {
        Self {
            t: Some(t),
            ..self.clone()
        }
    }

    pub fn speed(&self) -> f64 {
        rational_to_f64(&self.s)
    }

    fn t_value(&self) -> Option<f64> {
        self.t.as_ref().map(rational_to_f64)
    }

    /// Degree-0 part at `z`.
    pub fn zero_form(&self, z: f64) -> f64 {
        let a = self.alpha0.evaluate(z);
        match self.t_value() {
            Some(t) => (t * a).exp(),
            None => a,
        }
    }

    /// Derivative of the degree-0 part at `z`.
    pub fn zero_form_derivative(&self, z: f64) -> f64 {
        let da = self.alpha0.derivative().evaluate(z);
        match self.t_value() {
            Some(t) => t * da * (t * self.alpha0.evaluate(z)).exp(),
            None => da,
        }
    }

    /// Coefficient of `dz ^ dphi` at `z`.
    pub fn top_form(&self, z: f64) -> f64 {
        let g = self.g.evaluate(z);
        match self.t_value() {
            Some(t) => t * g * (t * self.alpha0.evaluate(z)).exp(),
            None => g,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BvlocError> {
        let rec: ProblemRecord = serde_json::from_str(text).map_err(|e| BvlocError::Parse(e.to_string()))?;
        let mut p = Self::new(&rec.alpha0, &rec.g, rational_field(&rec.s)?, rec.grid)?;
        if let Some(t) = &rec.t {
            p.t = Some(rational_field(t)?);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let field = |q: &Rational| match q.to_integer().to_i64() {
            Some(n) if q.is_integer() => serde_json::Value::from(n),
            _ => serde_json::Value::from(q.to_string()),
        };
        let rec = ProblemRecord {
            alpha0: self.alpha0.to_string(),
            g: self.g.to_string(),
            s: field(&self.s),
            grid: self.grid,
            t: self.t.as_ref().map(field),
        };
        serde_json::to_string(&rec).expect("problem serializes")
    }
}
