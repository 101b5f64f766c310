//! Sparse polynomials in `(x, y)` and the eigenfunction residual Ω.
//!
//! For `φ = P/Q` with `P = c0 + c1 x + c2 y`, `Q = d0 + d1 x + d2 y` and
//! right-hand sides `p1, p2`, the eigenfunction equation `∇φ·F = λφ`
//! multiplied through by `Q²` becomes
//!
//! ```text
//! Ω = λ·P·Q − (Q ∂ₓP − P ∂ₓQ)·p1 − (Q ∂ᵧP − P ∂ᵧQ)·p2 ≡ 0
//! ```
//!
//! [`omega_expand`] builds Ω with generic polynomial arithmetic;
//! [`h_residual`] evaluates the ten closed-form coefficient expressions of Ω
//! directly. The two must agree term by term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::eigenfunction::RationalEigenfunction;
use crate::error::Result;
use crate::ode::QuadraticODE;
use crate::scalar::Scalar;

/// `(i, j)` for the monomial `xⁱ yʲ`.
pub type Exponent = (u32, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly<S> {
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> BivariatePoly<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: S, exp: Exponent) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(S::one(), (1, 0))
    }

    pub fn y() -> Self {
        Self::monomial(S::one(), (0, 1))
    }

    /// `c0 + c1 x + c2 y`.
    pub fn linear(c: &[S; 3]) -> Self {
        Self::from_terms([((0, 0), c[0].clone()), ((1, 0), c[1].clone()), ((0, 1), c[2].clone())])
    }

    /// Sums repeated exponents and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, S)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: Exponent) -> S {
        self.terms.get(&exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())))
    }

    pub fn diff_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c.clone() * S::from_i64(i64::from(i)))),
        )
    }

    pub fn diff_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c.clone() * S::from_i64(i64::from(j)))),
        )
    }

    pub fn eval(&self, x: &S, y: &S) -> S {
        let pow = |base: &S, n: u32| (0..n).fold(S::one(), |acc, _| acc * base.clone());
        self.terms.iter().fold(S::zero(), |acc, (&(i, j), c)| acc + c.clone() * pow(x, i) * pow(y, j))
    }

    /// Substitutes `x → x + sx`, `y → y + sy`.
    pub fn shift(&self, sx: &S, sy: &S) -> Self {
        let xs = Self::x() + Self::constant(sx.clone());
        let ys = Self::y() + Self::constant(sy.clone());
        let pow = |base: &Self, n: u32| (0..n).fold(Self::constant(S::one()), |acc, _| &acc * base);
        self.terms.iter().fold(Self::zero(), |acc, (&(i, j), c)| acc + (&pow(&xs, i) * &pow(&ys, j)).scale(c))
    }

    /// Leading term in lex order with x > y.
    fn leading(&self) -> Option<(Exponent, &S)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// `self / divisor` when the division is exact, `None` otherwise.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let ((di, dj), dc) = divisor.leading()?;
        let mut rest = self.clone();
        let mut quotient = Self::zero();
        while let Some(((ri, rj), rc)) = rest.leading() {
            if ri < di || rj < dj {
                return None;
            }
            let term = Self::monomial(rc.checked_div(dc).ok()?, (ri - di, rj - dj));
            rest = &rest - &(&term * divisor);
            quotient = &quotient + &term;
        }
        Some(quotient)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BivariatePoly<T> {
        BivariatePoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl<S: Scalar> Add<&BivariatePoly<S>> for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn add(self, rhs: &BivariatePoly<S>) -> BivariatePoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub<&BivariatePoly<S>> for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn sub(self, rhs: &BivariatePoly<S>) -> BivariatePoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul<&BivariatePoly<S>> for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn mul(self, rhs: &BivariatePoly<S>) -> BivariatePoly<S> {
        let mut out = BivariatePoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Add for BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for BivariatePoly<S> {
    type Output = BivariatePoly<S>;
    fn neg(self) -> Self {
        BivariatePoly::from_terms(self.terms.into_iter().map(|(e, c)| (e, -c)))
    }
}

/// Graded order: total degree ascending, then higher powers of x first.
fn graded_key(&(i, j): &Exponent) -> (u32, std::cmp::Reverse<u32>) {
    (i + j, std::cmp::Reverse(i))
}

impl<S: Scalar> fmt::Display for BivariatePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(graded_key);
        for (n, exp) in keys.iter().enumerate() {
            let c = self.terms[exp].to_string();
            let simple = !c.contains([' ', '+']) && !c[1..].contains('-');
            let c = if simple { c } else { format!("({c})") };
            let mono = match *exp {
                (0, 0) => String::new(),
                (i, j) => {
                    let part = |v: &str, e: u32| match e {
                        0 => None,
                        1 => Some(v.to_string()),
                        e => Some(format!("{v}^{e}")),
                    };
                    [part("x", i), part("y", j)].into_iter().flatten().collect::<Vec<_>>().join("*")
                }
            };
            let term = match (mono.is_empty(), c.as_str()) {
                (true, _) => c.clone(),
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) => format!("{c}*{mono}"),
            };
            if n == 0 {
                write!(f, "{term}")?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// Exponents of the ten Ω coefficients in residual order: the constant, the
/// pure-y column, the x-linear column, then the x² column and x³.
pub const RESIDUAL_ORDER: [Exponent; 10] =
    [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0)];

/// The ten coefficients of Ω, in [`RESIDUAL_ORDER`].
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualVector<S>(pub [S; 10]);

impl<S: Scalar> ResidualVector<S> {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> &[S; 10] {
        &self.0
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|s| s.to_complex().norm()).fold(0.0, f64::max)
    }

    pub fn from_poly(p: &BivariatePoly<S>) -> Self {
        ResidualVector(RESIDUAL_ORDER.map(|e| p.coeff(e)))
    }
}

/// Expands Ω for `(ode, φ, λ)` with polynomial arithmetic. Constant terms
/// `a0, b0` are included when present.
pub fn omega_expand<S: Scalar>(ode: &QuadraticODE, ef: &RationalEigenfunction<S>, lambda: &S) -> BivariatePoly<S> {
    let (p1, p2) = ode.rhs::<S>();
    let p = BivariatePoly::linear(&ef.c);
    let q = BivariatePoly::linear(&ef.d);
    let wx = &(&q * &p.diff_x()) - &(&p * &q.diff_x());
    let wy = &(&q * &p.diff_y()) - &(&p * &q.diff_y());
    let lhs = (&p * &q).scale(lambda);
    &(&lhs - &(&wx * &p1)) - &(&wy * &p2)
}

/// The ten closed-form coefficient equations of Ω for a normal-form ODE.
#[allow(clippy::many_single_char_names)]
pub fn h_residual<S: Scalar>(
    ode: &QuadraticODE,
    ef: &RationalEigenfunction<S>,
    lambda: &S,
) -> Result<ResidualVector<S>> {
    ode.require_normal_form()?;
    let a = |i: usize| S::from_rational(ode.a(i));
    let b = |i: usize| S::from_rational(ode.b(i));
    let (a1, a2, a3, a4, a5) = (a(1), a(2), a(3), a(4), a(5));
    let (b1, b2, b3, b4, b5) = (b(1), b(2), b(3), b(4), b(5));
    let [c0, c1, c2] = ef.c.clone();
    let [d0, d1, d2] = ef.d.clone();
    let l = lambda.clone();
    // shorthand for owned products
    macro_rules! m {
        ($($e:expr),+) => { S::one() $(* $e.clone())+ };
    }
    let entries = [
        -m!(c0, d0, l),
        m!(a2, c1, d0) + m!(b2, c2, d0) - m!(a2, c0, d1) - m!(b2, c0, d2) - m!(c2, d0, l) - m!(c0, d2, l),
        m!(a5, c1, d0) + m!(b5, c2, d0) - m!(a5, c0, d1) - m!(a2, c2, d1) - m!(b5, c0, d2) + m!(a2, c1, d2)
            - m!(c2, d2, l),
        -m!(a5, c2, d1) + m!(a5, c1, d2),
        m!(a1, c1, d0) + m!(b1, c2, d0) - m!(a1, c0, d1) - m!(b1, c0, d2) - m!(c1, d0, l) - m!(c0, d1, l),
        m!(a4, c1, d0) + m!(b4, c2, d0) - m!(a4, c0, d1) - m!(a1, c2, d1) + m!(b2, c2, d1) - m!(b4, c0, d2)
            + m!(a1, c1, d2)
            - m!(b2, c1, d2)
            - m!(c2, d1, l)
            - m!(c1, d2, l),
        -m!(a4, c2, d1) + m!(b5, c2, d1) + m!(a4, c1, d2) - m!(b5, c1, d2),
        m!(a3, c1, d0) + m!(b3, c2, d0) - m!(a3, c0, d1) + m!(b1, c2, d1)
            - m!(b3, c0, d2)
            - m!(b1, c1, d2)
            - m!(c1, d1, l),
        -m!(a3, c2, d1) + m!(b4, c2, d1) + m!(a3, c1, d2) - m!(b4, c1, d2),
        m!(b3, c2, d1) - m!(b3, c1, d2),
    ];
    Ok(ResidualVector(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};
    use crate::exact::QuadExt;
    use num_complex::Complex64;

    type P = BivariatePoly<QuadExt>;

    fn q(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    #[test]
    fn derivative_of_monomial() {
        let p = P::monomial(q(1), (2, 1));
        assert_eq!(p.diff_x(), P::monomial(q(2), (1, 1)));
        assert_eq!(p.diff_y(), P::monomial(q(1), (2, 0)));
        assert!(P::constant(q(5)).diff_x().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let s = P::x() + P::y();
        let d = P::x() - P::y();
        let expected = P::from_terms([((2, 0), q(1)), ((0, 2), q(-1))]);
        assert_eq!(&s * &d, expected);
    }

    #[test]
    fn eval_with_radical_coefficient() {
        // x + c2 y at (0, 1) with c2 = -i√6/3 = -(1/3)√(-6)
        let c2 = QuadExt::new(int(0), ratio(-1, 3), int(-6));
        let p = P::linear(&[q(0), q(1), c2.clone()]);
        assert_eq!(p.eval(&q(0), &q(1)), c2);
    }

    #[test]
    fn never_stores_zeros() {
        let p = P::x() + P::y();
        let r = &p - &p;
        assert!(r.is_zero());
        assert_eq!(r.len(), 0);
        let z = P::from_terms([((1, 0), q(0)), ((0, 0), q(3)), ((0, 0), q(-3))]);
        assert!(z.is_zero());
    }

    #[test]
    fn shift_substitutes() {
        // (x + 1)² evaluated through shift of x²
        let p = P::monomial(q(1), (2, 0));
        let s = p.shift(&q(1), &q(0));
        assert_eq!(s, P::from_terms([((2, 0), q(1)), ((1, 0), q(2)), ((0, 0), q(1))]));
    }

    #[test]
    fn exact_division() {
        let a = P::x() + P::y();
        let b = P::x() - P::constant(q(2));
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b));
        assert_eq!((&prod + &P::constant(q(1))).exact_div(&a), None);
        assert_eq!(a.exact_div(&P::zero()), None);
    }

    #[test]
    fn display_is_graded() {
        let p = P::from_terms([((0, 2), q(1)), ((1, 1), q(-2)), ((0, 0), q(3)), ((2, 0), q(1)), ((0, 1), q(1))]);
        assert_eq!(p.to_string(), "3 + y + x^2 - 2*x*y + y^2");
        let r = P::monomial(QuadExt::new(int(1), int(-1), int(-6)), (1, 0));
        assert_eq!(r.to_string(), "(1 - sqrt(-6))*x");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn complex_coefficients() {
        let p = BivariatePoly::<Complex64>::linear(&[
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let v = p.eval(&Complex64::new(2.0, 0.0), &Complex64::new(5.0, 0.0));
        assert_eq!(v, Complex64::new(2.0, 1.0));
    }
}
