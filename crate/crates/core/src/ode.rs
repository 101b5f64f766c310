//! Planar quadratic vector fields.
//!
//! ```text
//! dx/dt = a0 + a1 x + a2 y + a3 x² + a4 xy + a5 y²
//! dy/dt = b0 + b1 x + b2 y + b3 x² + b4 xy + b5 y²
//! ```
//!
//! The system is in normal form when `a0 = b0 = 0`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{self, ExactRational};
use crate::poly::BivariatePoly;
use crate::scalar::Scalar;

/// Monomial exponents of the coefficients `a0..a5` / `b0..b5`.
pub const MONOMIALS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticODE {
    a: [ExactRational; 6],
    b: [ExactRational; 6],
}

impl QuadraticODE {
    /// Normal-form system from `(a1..a5)` and `(b1..b5)`.
    pub fn new(a: [ExactRational; 5], b: [ExactRational; 5]) -> Self {
        Self::with_constants(ExactRational::zero(), a, ExactRational::zero(), b)
    }

    pub fn with_constants(a0: ExactRational, a: [ExactRational; 5], b0: ExactRational, b: [ExactRational; 5]) -> Self {
        let [a1, a2, a3, a4, a5] = a;
        let [b1, b2, b3, b4, b5] = b;
        Self { a: [a0, a1, a2, a3, a4, a5], b: [b0, b1, b2, b3, b4, b5] }
    }

    /// Builds from the ten coefficient literals `(a1..a5 | b1..b5)`.
    pub fn parse(a: [&str; 5], b: [&str; 5]) -> Result<Self> {
        let p = |s: &str| rational::parse(s);
        Ok(Self::new(
            [p(a[0])?, p(a[1])?, p(a[2])?, p(a[3])?, p(a[4])?],
            [p(b[0])?, p(b[1])?, p(b[2])?, p(b[3])?, p(b[4])?],
        ))
    }

    pub fn from_full(a: [ExactRational; 6], b: [ExactRational; 6]) -> Self {
        Self { a, b }
    }

    /// `a_i` for `i` in `0..=5`.
    pub fn a(&self, i: usize) -> &ExactRational {
        &self.a[i]
    }

    pub fn b(&self, i: usize) -> &ExactRational {
        &self.b[i]
    }

    pub fn a_all(&self) -> &[ExactRational; 6] {
        &self.a
    }

    pub fn b_all(&self) -> &[ExactRational; 6] {
        &self.b
    }

    pub fn is_normal_form(&self) -> bool {
        self.a[0].is_zero() && self.b[0].is_zero()
    }

    pub fn require_normal_form(&self) -> Result<()> {
        if self.is_normal_form() {
            Ok(())
        } else {
            Err(Error::NotNormalForm { a0: rational::format(&self.a[0]), b0: rational::format(&self.b[0]) })
        }
    }

    /// The two right-hand sides as polynomials.
    pub fn rhs<S: Scalar>(&self) -> (BivariatePoly<S>, BivariatePoly<S>) {
        let build = |coeffs: &[ExactRational; 6]| {
            BivariatePoly::from_terms(MONOMIALS.iter().zip(coeffs).map(|(&e, c)| (e, S::from_rational(c))))
        };
        (build(&self.a), build(&self.b))
    }

    pub fn to_f64(&self) -> FloatField {
        FloatField { a: self.a.clone().map(|r| rational::to_f64(&r)), b: self.b.clone().map(|r| rational::to_f64(&r)) }
    }

    /// The ten normal-form coefficients `a1..a5, b1..b5` as text.
    pub fn to_text(&self) -> [String; 10] {
        std::array::from_fn(|i| if i < 5 { rational::format(&self.a[i + 1]) } else { rational::format(&self.b[i - 4]) })
    }
}

impl fmt::Display for QuadraticODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.rhs::<crate::exact::QuadExt>();
        write!(f, "dx/dt = {p}; dy/dt = {q}")
    }
}

/// Floating-point copy of the vector field for integration.
#[derive(Clone, Copy, Debug)]
pub struct FloatField {
    pub a: [f64; 6],
    pub b: [f64; 6],
}

impl FloatField {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        let m = [1.0, x, y, x * x, x * y, y * y];
        let dot = |c: &[f64; 6]| c.iter().zip(&m).map(|(c, m)| c * m).sum::<f64>();
        [dot(&self.a), dot(&self.b)]
    }
}

/// On-disk form: `{"a": [a1..a5], "b": [b1..b5], "a0": .., "b0": ..}`.
#[derive(Serialize, Deserialize)]
struct OdeFile {
    a: Vec<serde_json::Value>,
    b: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a0: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b0: Option<serde_json::Value>,
}

impl QuadraticODE {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: OdeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let list = |name: &str, v: &[serde_json::Value]| -> Result<[ExactRational; 5]> {
            if v.len() != 5 {
                return Err(Error::Parse(format!("\"{name}\" must hold 5 coefficients, got {}", v.len())));
            }
            let parsed = v.iter().map(rational::serde_text::from_json).collect::<Result<Vec<_>>>()?;
            Ok(parsed.try_into().expect("length checked"))
        };
        let constant = |v: &Option<serde_json::Value>| -> Result<ExactRational> {
            v.as_ref().map_or(Ok(ExactRational::zero()), rational::serde_text::from_json)
        };
        Ok(Self::with_constants(constant(&file.a0)?, list("a", &file.a)?, constant(&file.b0)?, list("b", &file.b)?))
    }

    pub fn to_json_string(&self) -> String {
        let text = |r: &ExactRational| serde_json::Value::String(rational::format(r));
        let constant = |r: &ExactRational| (!r.is_zero()).then(|| text(r));
        let file = OdeFile {
            a: self.a[1..].iter().map(text).collect(),
            b: self.b[1..].iter().map(text).collect(),
            a0: constant(&self.a[0]),
            b0: constant(&self.b[0]),
        };
        serde_json::to_string_pretty(&file).expect("serialising plain JSON")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    #[test]
    fn json_accepts_mixed_literals() {
        let ode = QuadraticODE::from_json_str(r#"{"a": [-4, -2, 1, 0, "-2/3"], "b": [3, 1, 0, 2, "5/3"]}"#).unwrap();
        assert!(ode.is_normal_form());
        assert_eq!(*ode.a(5), ratio(-2, 3));
        let with_consts =
            QuadraticODE::from_json_str(r#"{"a": [0, 0, 0, 1, 0], "b": [-1, 0, 0, 0, 1], "b0": -1, "a0": 0.5}"#)
                .unwrap();
        assert_eq!(*with_consts.b(0), ratio(-1, 1));
        assert_eq!(*with_consts.a(0), ratio(1, 2));
        assert!(!with_consts.is_normal_form());
    }

    #[test]
    fn json_round_trip() {
        let ode = QuadraticODE::parse(["-4", "-2", "1", "0", "-2/3"], ["3", "1", "0", "2", "5/3"]).unwrap();
        let back = QuadraticODE::from_json_str(&ode.to_json_string()).unwrap();
        assert_eq!(back, ode);
    }

    #[test]
    fn json_errors() {
        assert!(QuadraticODE::from_json_str(r#"{"a": [1, 2], "b": [1, 2, 3, 4, 5]}"#).is_err());
        assert!(QuadraticODE::from_json_str(r#"{"a": [1, 2, 3, 4, "x"], "b": [1, 2, 3, 4, 5]}"#).is_err());
        assert!(QuadraticODE::from_json_str("not json").is_err());
    }

    #[test]
    fn float_field_matches_definition() {
        let ode = QuadraticODE::parse(["1", "-2", "2", "1", "0"], ["3", "1", "0", "2", "1"]).unwrap();
        let [dx, dy] = ode.to_f64().eval(0.5, -1.0);
        assert_eq!(dx, 0.5 + 2.0 + 0.5 - 0.5);
        assert_eq!(dy, 1.5 - 1.0 - 1.0 + 1.0);
    }
}
