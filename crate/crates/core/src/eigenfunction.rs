//! Linear rational eigenfunctions `φ = (c0 + c1 x + c2 y) / (d0 + d1 x + d2 y)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QuadExt;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalEigenfunction<S> {
    /// Numerator coefficients `c0, c1, c2`.
    pub c: [S; 3],
    /// Denominator coefficients `d0, d1, d2`.
    pub d: [S; 3],
}

impl<S: Scalar> RationalEigenfunction<S> {
    pub fn new(c: [S; 3], d: [S; 3]) -> Self {
        Self { c, d }
    }

    pub fn numerator_at(&self, x: &S, y: &S) -> S {
        linear_at(&self.c, x, y)
    }

    pub fn denominator_at(&self, x: &S, y: &S) -> S {
        linear_at(&self.d, x, y)
    }

    /// `P(x, y) / Q(x, y)`.
    pub fn eval(&self, x: &S, y: &S) -> Result<S> {
        let den = self.denominator_at(x, y);
        if den.is_negligible() {
            return Err(Error::Pole { x: x.to_complex().re, y: y.to_complex().re });
        }
        self.numerator_at(x, y).checked_div(&den)
    }

    /// Both coefficient blocks are nonzero and `φ` is not a constant.
    pub fn is_nontrivial(&self) -> bool {
        !is_zero_vec(&self.c) && !is_zero_vec(&self.d) && !proportional(&self.c, &self.d)
    }

    /// `(c | d)` as one coefficient 6-vector.
    pub fn coefficients(&self) -> [S; 6] {
        let [c0, c1, c2] = self.c.clone();
        let [d0, d1, d2] = self.d.clone();
        [c0, c1, c2, d0, d1, d2]
    }

    /// Same function up to a common factor on numerator and denominator.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        proportional(&self.coefficients(), &other.coefficients())
    }

    /// `self = α·other` for some constant α: numerators and denominators
    /// are each proportional, with possibly different factors.
    pub fn same_class(&self, other: &Self) -> bool {
        proportional(&self.c, &other.c) && proportional(&self.d, &other.d)
    }

    pub fn reciprocal(&self) -> Self {
        Self { c: self.d.clone(), d: self.c.clone() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RationalEigenfunction<T> {
        RationalEigenfunction { c: self.c.clone().map(|v| f(&v)), d: self.d.clone().map(|v| f(&v)) }
    }

    pub fn to_complex(&self) -> RationalEigenfunction<Complex64> {
        self.map(Scalar::to_complex)
    }
}

fn linear_at<S: Scalar>(c: &[S; 3], x: &S, y: &S) -> S {
    c[0].clone() + c[1].clone() * x.clone() + c[2].clone() * y.clone()
}

fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `u = α·v` for some nonzero α (both vectors nonzero). Exact for exact
/// scalars; uses cross products `u_i v_j − u_j v_i`.
pub fn proportional<S: Scalar>(u: &[S], v: &[S]) -> bool {
    if u.len() != v.len() || is_zero_vec(u) || is_zero_vec(v) {
        return false;
    }
    (0..u.len())
        .all(|i| (i + 1..u.len()).all(|j| (u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone()).is_negligible()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair<S> {
    pub lambda: S,
    #[serde(flatten)]
    pub ef: RationalEigenfunction<S>,
}

impl<S: Scalar> Eigenpair<S> {
    pub fn new(lambda: S, ef: RationalEigenfunction<S>) -> Self {
        Self { lambda, ef }
    }

    pub fn to_complex(&self) -> Eigenpair<Complex64> {
        Eigenpair { lambda: self.lambda.to_complex(), ef: self.ef.to_complex() }
    }
}

impl Eigenpair<QuadExt> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialising plain JSON")
    }
}
