//! Closed-form eigenpairs for the L and X families, their verification
//! against Ω, and reconstruction of the vector field from two eigenpairs.
//!
//! Everything here runs in `Q(√D)` with `D = a1² + 4a2b1 − 2a1b2 + b2²`,
//! so the returned eigenpairs satisfy the residual system exactly.
//! Eigenfunctions are normalised with `c1 = d1 = 1`.

use num_traits::Zero;
use serde::Serialize;

use crate::eigenfunction::{proportional, Eigenpair, RationalEigenfunction};
use crate::error::{Error, Result};
use crate::exact::rational::{self, int, ExactRational};
use crate::exact::QuadExt;
use crate::family::{self, Family};
use crate::ode::{QuadraticODE, MONOMIALS};
use crate::poly::{h_residual, omega_expand, BivariatePoly, ResidualVector};
use crate::scalar::Scalar;

/// `√(a1² + 4a2b1 − 2a1b2 + b2²)`, principal branch.
pub fn discriminant(ode: &QuadraticODE) -> QuadExt {
    QuadExt::sqrt(discriminant_radicand(ode))
}

pub fn discriminant_radicand(ode: &QuadraticODE) -> ExactRational {
    let (a1, a2, b1, b2) = (ode.a(1), ode.a(2), ode.b(1), ode.b(2));
    a1 * a1 + int(4) * a2 * b1 - int(2) * a1 * b2 + b2 * b2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpectrum {
    pub family: Family,
    pub delta: QuadExt,
    pub lambda1: QuadExt,
    pub lambda2: QuadExt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySolution {
    pub spectrum: FamilySpectrum,
    pub pairs: [Eigenpair<QuadExt>; 2],
}

fn q(r: &ExactRational) -> QuadExt {
    QuadExt::rational(r.clone())
}

fn half(v: QuadExt) -> QuadExt {
    v.scale(&rational::ratio(1, 2))
}

fn nonzero(value: &ExactRational, name: &str) -> Result<()> {
    if value.is_zero() {
        Err(Error::DegenerateParameter(name.into()))
    } else {
        Ok(())
    }
}

fn check_pair(ode: &QuadraticODE, pair: &Eigenpair<QuadExt>) -> Result<()> {
    if !pair.ef.is_nontrivial() {
        return Err(Error::DegenerateParameter("eigenfunction collapses to a constant".into()));
    }
    if !h_residual(ode, &pair.ef, &pair.lambda)?.is_zero() {
        return Err(Error::InternalConsistency("closed-form eigenpair fails the residual system".into()));
    }
    Ok(())
}

/// L-family eigenpairs for an explicit branch `delta` of the discriminant.
pub fn eigenpairs_l_with(ode: &QuadraticODE, delta: &QuadExt) -> Result<[Eigenpair<QuadExt>; 2]> {
    if !family::membership_l(ode)?.0 {
        return Err(Error::NotInFamily("L".into()));
    }
    let (a1, a2, a4, b1, b2, b4) = (ode.a(1), ode.a(2), ode.a(4), ode.b(1), ode.b(2), ode.b(4));
    nonzero(b1, "b1")?;
    let den = a4 * b1 - b2 * b4;
    nonzero(&den, "a4*b1 - b2*b4")?;
    if delta.is_zero() {
        return Err(Error::DegenerateParameter("discriminant".into()));
    }
    let two_b1 = q(&(int(2) * b1));
    let base = q(&(b2 - a1));
    let c2 = (&base - delta) / &two_b1;
    let d0 = q(&((a2 * b1 - a1 * b2) / &den));
    let d2 = q(&((a2 * b4 - a1 * a4) / &den));
    let lambda1 = half(q(&(a1 + b2)) - delta);
    let one = QuadExt::one;
    let phi1 = RationalEigenfunction::new([QuadExt::zero(), one(), c2.clone()], [d0, one(), d2]);
    let k2 = (&base + delta) / &two_b1;
    let phi2 = RationalEigenfunction::new([QuadExt::zero(), one(), k2], [QuadExt::zero(), one(), c2]);
    let pairs = [Eigenpair::new(lambda1, phi1), Eigenpair::new(delta.clone(), phi2)];
    for p in &pairs {
        check_pair(ode, p)?;
    }
    Ok(pairs)
}

pub fn eigenpairs_l(ode: &QuadraticODE) -> Result<[Eigenpair<QuadExt>; 2]> {
    eigenpairs_l_with(ode, &discriminant(ode))
}

/// Shared denominator of `c0` and `k0` in the X formulas.
pub fn x_denominator(ode: &QuadraticODE) -> ExactRational {
    let (a1, a2, a4, b1, b2, b4) = (ode.a(1), ode.a(2), ode.a(4), ode.b(1), ode.b(2), ode.b(4));
    -(b1 * a4 * a4) + b4 * (a1 * a4 - b2 * a4 + a2 * b4)
}

fn x_pair(ode: &QuadraticODE, delta: &QuadExt) -> Eigenpair<QuadExt> {
    let (a1, a2, a4, b1, b2, b4) = (ode.a(1), ode.a(2), ode.a(4), ode.b(1), ode.b(2), ode.b(4));
    let den = q(&x_denominator(ode));
    let numer = q(&(int(-2) * a2 * b1 * a4))
        + q(&(b2 * a4)) * (q(&(a1 - b2)) - delta)
        + q(&(a2 * b4)) * (q(&(a1 + b2)) + delta);
    let c0 = numer / den;
    let c2 = (q(&(b2 - a1)) + delta) / q(&(int(2) * b1));
    let lambda = half(-q(&(a1 + b2)) - delta);
    Eigenpair::new(
        lambda,
        RationalEigenfunction::new([c0, QuadExt::one(), c2.clone()], [QuadExt::zero(), QuadExt::one(), c2]),
    )
}

/// X-family eigenpairs for an explicit branch `delta`; the second pair uses `−delta`.
pub fn eigenpairs_x_with(ode: &QuadraticODE, delta: &QuadExt) -> Result<[Eigenpair<QuadExt>; 2]> {
    if !family::membership_x(ode)?.0 {
        return Err(Error::NotInFamily("X".into()));
    }
    nonzero(ode.b(1), "b1")?;
    nonzero(&x_denominator(ode), "-b1*a4^2 + b4*(a1*a4 - b2*a4 + a2*b4)")?;
    if delta.is_zero() {
        return Err(Error::DegenerateParameter("discriminant".into()));
    }
    let pairs = [x_pair(ode, delta), x_pair(ode, &-delta)];
    for p in &pairs {
        check_pair(ode, p)?;
    }
    Ok(pairs)
}

pub fn eigenpairs_x(ode: &QuadraticODE) -> Result<[Eigenpair<QuadExt>; 2]> {
    eigenpairs_x_with(ode, &discriminant(ode))
}

/// Classifies and solves. L formulas are used when both families apply,
/// unless `force` selects one; if they degenerate there, X is tried.
pub fn solve_family(ode: &QuadraticODE, force: Option<Family>) -> Result<FamilySolution> {
    let membership = family::classify(ode)?;
    let chosen = match force {
        Some(f) => f,
        None => membership.preferred().ok_or_else(|| Error::NotInFamily("L or X".into()))?,
    };
    let delta = discriminant(ode);
    let solve = |f: Family| match f {
        Family::L => eigenpairs_l_with(ode, &delta),
        Family::X => eigenpairs_x_with(ode, &delta),
    };
    let (chosen, pairs) = match (solve(chosen), force) {
        (Ok(pairs), _) => (chosen, pairs),
        // on L ∩ X the other family's formulas may survive a degenerate stratum
        (Err(Error::DegenerateParameter(_)), None) if membership.in_l && membership.in_x => {
            (Family::X, solve(Family::X)?)
        }
        (Err(e), _) => return Err(e),
    };
    let spectrum =
        FamilySpectrum { family: chosen, delta, lambda1: pairs[0].lambda.clone(), lambda2: pairs[1].lambda.clone() };
    Ok(FamilySolution { spectrum, pairs })
}

/// Residual of `∇φ·F − λφ` (times `Q²`) as its ten monomial coefficients.
/// Normal-form systems use the closed-form residual equations; systems
/// with constant terms are expanded symbolically.
pub fn verify_eigenpair<S: Scalar>(ode: &QuadraticODE, pair: &Eigenpair<S>) -> ResidualVector<S> {
    if ode.is_normal_form() {
        h_residual(ode, &pair.ef, &pair.lambda).expect("normal form checked")
    } else {
        ResidualVector::from_poly(&omega_expand(ode, &pair.ef, &pair.lambda))
    }
}

/// Recovers the vector field from two eigenpairs by solving
/// `[∇φ1; ∇φ2]·F = (λ1φ1, λ2φ2)` with Cramer's rule. With
/// `Wᵢ = Qᵢ∇Pᵢ − Pᵢ∇Qᵢ` the field is
///
/// ```text
/// dx/dt = (λ1 P1 Q1 W2y − λ2 P2 Q2 W1y) / (W1x W2y − W2x W1y)
/// dy/dt = (λ2 P2 Q2 W1x − λ1 P1 Q1 W2x) / (W1x W2y − W2x W1y)
/// ```
///
/// The result is accepted when the determinant divides both numerators
/// exactly and the quotients stop at degree 2. For eigenfunctions without
/// denominator constants (`d0 = m0 = 0`) the determinant is already constant.
pub fn ode_from_eigenpairs(p1: &Eigenpair<QuadExt>, p2: &Eigenpair<QuadExt>) -> Result<QuadraticODE> {
    type P = BivariatePoly<QuadExt>;
    let parts = |ef: &RationalEigenfunction<QuadExt>| {
        let p = P::linear(&ef.c);
        let q = P::linear(&ef.d);
        let wx = &(&q * &p.diff_x()) - &(&p * &q.diff_x());
        let wy = &(&q * &p.diff_y()) - &(&p * &q.diff_y());
        (&p * &q, wx, wy)
    };
    let (pq1, w1x, w1y) = parts(&p1.ef);
    let (pq2, w2x, w2y) = parts(&p2.ef);
    let det = &(&w1x * &w2y) - &(&w2x * &w1y);
    if det.is_zero() {
        return Err(Error::DependentEigenfunctions);
    }
    let scaled = |pq: &P, lambda: &QuadExt| pq.scale(lambda);
    let n1 = &(&scaled(&pq1, &p1.lambda) * &w2y) - &(&scaled(&pq2, &p2.lambda) * &w1y);
    let n2 = &(&scaled(&pq2, &p2.lambda) * &w1x) - &(&scaled(&pq1, &p1.lambda) * &w2x);
    let divide = |n: &P, name: &str| {
        n.exact_div(&det).ok_or_else(|| {
            Error::NotQuadratic(format!("d{name}/dt numerator is not divisible by the determinant {det}"))
        })
    };
    let (n1, n2) = (divide(&n1, "x")?, divide(&n2, "y")?);
    let read = |n: &P, name: &str| -> Result<[ExactRational; 6]> {
        if let Some((&(i, j), c)) = n.terms().find(|((i, j), _)| i + j > 2) {
            return Err(Error::NotQuadratic(format!("d{name}/dt term ({c})*x^{i}*y^{j}")));
        }
        let mut out: [ExactRational; 6] = Default::default();
        for (slot, e) in out.iter_mut().zip(MONOMIALS) {
            let c = n.coeff(e);
            *slot = c
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::NonRationalCoefficient(format!("d{name}/dt x^{}y^{}: {c}", e.0, e.1)))?;
        }
        Ok(out)
    };
    Ok(QuadraticODE::from_full(read(&n1, "x")?, read(&n2, "y")?))
}

/// Two eigenpairs are dependent when one eigenfunction is a constant
/// multiple of the other or of its reciprocal.
pub fn independent<S: Scalar>(p1: &Eigenpair<S>, p2: &Eigenpair<S>) -> bool {
    let (a, b) = (&p1.ef, &p2.ef);
    !(proportional(&a.c, &b.c) && proportional(&a.d, &b.d)) && !(proportional(&a.c, &b.d) && proportional(&a.d, &b.c))
}
