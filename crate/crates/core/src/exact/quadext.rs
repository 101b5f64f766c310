//! Elements of a quadratic field Q(√D).
//!
//! A [`QuadExt`] is `rat + rad·√radicand`. The radicand is canonicalised on
//! construction: rational radicands are cleared of denominators and square
//! factors are pulled into `rad`, so `√(-24)` and `2·√(-6)` are the same
//! value with the same representation. A purely rational value carries
//! radicand 0 and adopts the radicand of whatever it is combined with.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, ExactRational};
use crate::error::{Error, Result};

/// Trial division stops here; larger cofactors are only tested for being
/// perfect squares. Equality and field compatibility never rely on the
/// radicand being fully square-free.
const TRIAL_DIVISION_LIMIT: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct QuadExt {
    rat: ExactRational,
    rad: ExactRational,
    radicand: BigInt,
}

impl QuadExt {
    pub fn new(rat: ExactRational, rad: ExactRational, radicand: ExactRational) -> Self {
        // √(p/q) = √(p·q) / q
        let denom = radicand.denom().clone();
        let numer = radicand.numer() * &denom;
        let rad = rad / BigRational::from_integer(denom);
        let (square, free) = split_square(&numer);
        Self::from_parts(rat, rad * BigRational::from_integer(square), free)
    }

    fn from_parts(rat: ExactRational, rad: ExactRational, radicand: BigInt) -> Self {
        if rad.is_zero() || radicand.is_zero() {
            return Self { rat, rad: ExactRational::zero(), radicand: BigInt::zero() };
        }
        if radicand.is_one() {
            return Self { rat: rat + rad, rad: ExactRational::zero(), radicand: BigInt::zero() };
        }
        Self { rat, rad, radicand }
    }

    pub fn rational(r: ExactRational) -> Self {
        Self { rat: r, rad: ExactRational::zero(), radicand: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rational::int(n))
    }

    /// `√d` on the principal branch (`i·√|d|` for negative `d`).
    pub fn sqrt(d: ExactRational) -> Self {
        Self::new(ExactRational::zero(), ExactRational::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rat(&self) -> &ExactRational {
        &self.rat
    }

    pub fn rad(&self) -> &ExactRational {
        &self.rad
    }

    /// Canonical radicand; 0 for rational values.
    pub fn radicand(&self) -> ExactRational {
        BigRational::from_integer(self.radicand.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn as_rational(&self) -> Option<&ExactRational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn conj(&self) -> Self {
        Self { rat: self.rat.clone(), rad: -&self.rad, radicand: self.radicand.clone() }
    }

    /// Field norm `rat² − rad²·D`.
    pub fn norm(&self) -> ExactRational {
        &self.rat * &self.rat - &self.rad * &self.rad * BigRational::from_integer(self.radicand.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        let rat = rational::to_f64(&self.rat);
        if self.rad.is_zero() {
            return Complex64::new(rat, 0.0);
        }
        let rad = rational::to_f64(&self.rad);
        let root = rational::to_f64(&BigRational::from_integer(self.radicand.abs())).sqrt();
        if self.radicand.is_negative() {
            Complex64::new(rat, rad * root)
        } else {
            Complex64::new(rat + rad * root, 0.0)
        }
    }

    /// Brings `self` and `other` onto a common radicand.
    fn align(&self, other: &Self) -> Result<(Self, Self)> {
        if self.radicand == other.radicand || other.rad.is_zero() {
            let mut o = other.clone();
            if o.rad.is_zero() {
                o.radicand = self.radicand.clone();
            }
            return Ok((self.clone(), o));
        }
        if self.rad.is_zero() {
            let mut s = self.clone();
            s.radicand = other.radicand.clone();
            return Ok((s, other.clone()));
        }
        // √D2 = (√(D1·D2) / |D1|)·√D1 when D1·D2 is a square of matching sign
        let (d1, d2) = (&self.radicand, &other.radicand);
        let product = d1 * d2;
        if product.is_positive() {
            let root = product.sqrt();
            if &root * &root == product {
                let factor = BigRational::new(root, d1.abs());
                let moved = Self { rat: other.rat.clone(), rad: &other.rad * factor, radicand: d1.clone() };
                return Ok((self.clone(), moved));
            }
        }
        Err(Error::IncompatibleRadicands { lhs: d1.to_string(), rhs: d2.to_string() })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = self.align(rhs)?;
        Ok(Self::from_parts(a.rat + b.rat, a.rad + b.rad, a.radicand))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = self.align(rhs)?;
        Ok(Self::from_parts(a.rat - b.rat, a.rad - b.rad, a.radicand))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = self.align(rhs)?;
        let d = BigRational::from_integer(a.radicand.clone());
        let rat = &a.rat * &b.rat + &a.rad * &b.rad * d;
        let rad = &a.rat * &b.rad + &a.rad * &b.rat;
        Ok(Self::from_parts(rat, rad, a.radicand))
    }

    /// Division through the conjugate: `(u + v√D)⁻¹ = (u − v√D)/(u² − v²D)`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = self.align(rhs)?;
        let norm = b.norm();
        if norm.is_zero() {
            // only reachable if the radicand was not reduced far enough to
            // expose a perfect square
            return Err(Error::DivisionByZero);
        }
        let numer = a.checked_mul(&b.conj())?;
        Ok(Self::from_parts(numer.rat / &norm, numer.rad / &norm, numer.radicand))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, r: &ExactRational) -> Self {
        Self::from_parts(&self.rat * r, &self.rad * r, self.radicand.clone())
    }
}

/// Splits `n = square² · rest`, pulling out every square factor found by
/// trial division and a final perfect-square cofactor.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        let pp = &bp * &bp;
        if pp > rest {
            break;
        }
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            square *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
        rest = BigInt::one();
    }
    (square, if negative { -rest } else { rest })
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        if self.rat != other.rat {
            return false;
        }
        match self.align(other) {
            Ok((a, b)) => a.rad == b.rad,
            Err(_) => false,
        }
    }
}

impl Eq for QuadExt {}

impl From<ExactRational> for QuadExt {
    fn from(r: ExactRational) -> Self {
        Self::rational(r)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("QuadExt::{}: {e}", stringify!($method)))
            }
        }
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { rat: -self.rat, rad: -self.rad, radicand: self.radicand }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -self.clone()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad.is_zero() {
            return write!(f, "{}", rational::format(&self.rat));
        }
        let root = format!("sqrt({})", self.radicand);
        let coeff = |r: &ExactRational| {
            if r.is_one() {
                root.clone()
            } else {
                format!("{}*{root}", rational::format(r))
            }
        };
        if self.rat.is_zero() {
            if self.rad.is_negative() {
                write!(f, "-{}", coeff(&-&self.rad))
            } else {
                write!(f, "{}", coeff(&self.rad))
            }
        } else if self.rad.is_negative() {
            write!(f, "{} - {}", rational::format(&self.rat), coeff(&-&self.rad))
        } else {
            write!(f, "{} + {}", rational::format(&self.rat), coeff(&self.rad))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadExtText {
    #[serde(with = "rational::serde_text")]
    rat: ExactRational,
    #[serde(with = "rational::serde_text")]
    rad: ExactRational,
    #[serde(with = "rational::serde_text")]
    radicand: ExactRational,
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadExtText { rat: self.rat.clone(), rad: self.rad.clone(), radicand: self.radicand() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = QuadExtText::deserialize(d)?;
        Ok(QuadExt::new(t.rat, t.rad, t.radicand))
    }
}
