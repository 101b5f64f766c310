//! Exact membership tests for the solvable families L and X, the closed-form
//! parameterisations of both families, and the constant-removing shift.
//!
//! L is the linear space cut out by `b3, a5, a4 − b5, a3 − b4`. X is cut out
//! by nine quadratics in the coefficients. Both are measure-zero, so all
//! membership decisions are made in exact rational arithmetic.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{self, int, ExactRational};
use crate::exact::QuadExt;
use crate::ode::{QuadraticODE, MONOMIALS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    L,
    X,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::L => "L",
            Family::X => "X",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Family::L),
            "X" | "x" => Ok(Family::X),
            other => Err(Error::Parse(format!("unknown family {other:?} (expected L or X)"))),
        }
    }
}

/// Text of the defining polynomials, in evaluation order.
pub const L_POLYNOMIALS: [&str; 4] = ["b3", "a5", "a4 - b5", "a3 - b4"];

pub const X_POLYNOMIALS: [&str; 9] = [
    "4a5b3 - a4b4",
    "2a4b3 - 2a3b4 + b4^2 - 4b3b5",
    "2a2b3 - a1b4 + b2b4 - 2b1b5",
    "2a5b1 - a2b4",
    "a4b1 - a1b4 + b2b4 - 2b1b5",
    "2a3b1 - 2a1b3 + 2b2b3 - b1b4",
    "a4^2 - 4a3a5 + 2a5b4 - 2a4b5",
    "a2a4 - 2a1a5 + 2a5b2 - 2a2b5",
    "2a2a3 - a1a4 + a4b2 - a2b4",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub family: Family,
    /// Zero-based index into [`L_POLYNOMIALS`] or [`X_POLYNOMIALS`].
    pub index: usize,
    #[serde(serialize_with = "ser_rational")]
    pub value: ExactRational,
}

fn ser_rational<S: serde::Serializer>(r: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyMembership {
    pub in_l: bool,
    pub in_x: bool,
    pub l_residuals: [ExactRational; 4],
    pub x_residuals: [ExactRational; 9],
    pub violated: Vec<Violation>,
}

impl FamilyMembership {
    pub fn in_any(&self) -> bool {
        self.in_l || self.in_x
    }

    /// Family used for solving; L wins when both hold.
    pub fn preferred(&self) -> Option<Family> {
        if self.in_l {
            Some(Family::L)
        } else if self.in_x {
            Some(Family::X)
        } else {
            None
        }
    }

    /// Membership with `|residual| < tol` instead of exact zero, for
    /// coefficients that were only known to finite decimal precision.
    pub fn within(&self, tol: f64) -> (bool, bool) {
        let small = |r: &ExactRational| rational::to_f64(r).abs() < tol;
        (self.l_residuals.iter().all(small), self.x_residuals.iter().all(small))
    }
}

struct Coeffs {
    a: [ExactRational; 6],
    b: [ExactRational; 6],
}

fn coeffs(ode: &QuadraticODE) -> Coeffs {
    Coeffs { a: ode.a_all().clone(), b: ode.b_all().clone() }
}

/// The four linear residuals of L.
pub fn membership_l(ode: &QuadraticODE) -> Result<(bool, [ExactRational; 4])> {
    ode.require_normal_form()?;
    let Coeffs { a, b } = coeffs(ode);
    let r = [b[3].clone(), a[5].clone(), &a[4] - &b[5], &a[3] - &b[4]];
    Ok((r.iter().all(Zero::is_zero), r))
}

/// The nine quadratic residuals of X.
pub fn membership_x(ode: &QuadraticODE) -> Result<(bool, [ExactRational; 9])> {
    ode.require_normal_form()?;
    let Coeffs { a, b } = coeffs(ode);
    let n = |k: i64| int(k);
    let r = [
        n(4) * &a[5] * &b[3] - &a[4] * &b[4],
        n(2) * &a[4] * &b[3] - n(2) * &a[3] * &b[4] + &b[4] * &b[4] - n(4) * &b[3] * &b[5],
        n(2) * &a[2] * &b[3] - &a[1] * &b[4] + &b[2] * &b[4] - n(2) * &b[1] * &b[5],
        n(2) * &a[5] * &b[1] - &a[2] * &b[4],
        &a[4] * &b[1] - &a[1] * &b[4] + &b[2] * &b[4] - n(2) * &b[1] * &b[5],
        n(2) * &a[3] * &b[1] - n(2) * &a[1] * &b[3] + n(2) * &b[2] * &b[3] - &b[1] * &b[4],
        &a[4] * &a[4] - n(4) * &a[3] * &a[5] + n(2) * &a[5] * &b[4] - n(2) * &a[4] * &b[5],
        &a[2] * &a[4] - n(2) * &a[1] * &a[5] + n(2) * &a[5] * &b[2] - n(2) * &a[2] * &b[5],
        n(2) * &a[2] * &a[3] - &a[1] * &a[4] + &a[4] * &b[2] - &a[2] * &b[4],
    ];
    Ok((r.iter().all(Zero::is_zero), r))
}

pub fn classify(ode: &QuadraticODE) -> Result<FamilyMembership> {
    let (in_l, l_residuals) = membership_l(ode)?;
    let (in_x, x_residuals) = membership_x(ode)?;
    let violated = l_residuals
        .iter()
        .enumerate()
        .map(|(i, r)| (Family::L, i, r))
        .chain(x_residuals.iter().enumerate().map(|(i, r)| (Family::X, i, r)))
        .filter(|(_, _, r)| !r.is_zero())
        .map(|(family, index, value)| Violation { family, index, value: value.clone() })
        .collect();
    Ok(FamilyMembership { in_l, in_x, l_residuals, x_residuals, violated })
}

/// Free coordinates `(a1, a2, a4, b1, b2, b4)` shared by both families.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeParams {
    pub a1: ExactRational,
    pub a2: ExactRational,
    pub a4: ExactRational,
    pub b1: ExactRational,
    pub b2: ExactRational,
    pub b4: ExactRational,
}

impl FreeParams {
    pub fn from_ints(v: [i64; 6]) -> Self {
        let [a1, a2, a4, b1, b2, b4] = v.map(int);
        Self { a1, a2, a4, b1, b2, b4 }
    }
}

/// The member of X with the given free coordinates:
/// `a3 = (a1a4 − b2a4 + a2b4)/(2a2)`, `a5 = a2b4/(2b1)`,
/// `b3 = b1a4/(2a2)`, `b5 = (b1a4 − a1b4 + b2b4)/(2b1)`.
pub fn x_parameterization(p: &FreeParams) -> Result<QuadraticODE> {
    if p.a2.is_zero() {
        return Err(Error::DegenerateParameter("a2".into()));
    }
    if p.b1.is_zero() {
        return Err(Error::DegenerateParameter("b1".into()));
    }
    let two = int(2);
    let a3 = (&p.a1 * &p.a4 - &p.b2 * &p.a4 + &p.a2 * &p.b4) / (&two * &p.a2);
    let a5 = &p.a2 * &p.b4 / (&two * &p.b1);
    let b3 = &p.b1 * &p.a4 / (&two * &p.a2);
    let b5 = (&p.b1 * &p.a4 - &p.a1 * &p.b4 + &p.b2 * &p.b4) / (&two * &p.b1);
    Ok(QuadraticODE::new(
        [p.a1.clone(), p.a2.clone(), a3, p.a4.clone(), a5],
        [p.b1.clone(), p.b2.clone(), b3, p.b4.clone(), b5],
    ))
}

/// The member of L with the given free coordinates:
/// `dx/dt = a1 x + a2 y + x(b4 x + a4 y)`, `dy/dt = b1 x + b2 y + y(b4 x + a4 y)`.
pub fn l_parameterization(p: &FreeParams) -> QuadraticODE {
    let zero = ExactRational::zero();
    QuadraticODE::new(
        [p.a1.clone(), p.a2.clone(), p.b4.clone(), p.a4.clone(), zero.clone()],
        [p.b1.clone(), p.b2.clone(), zero, p.b4.clone(), p.a4.clone()],
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub ode: QuadraticODE,
    /// `(su, sv)` with `x = u + su`, `y = v + sv`.
    pub shift: (ExactRational, ExactRational),
    /// Whether the shifted system really has no constant terms.
    pub constants_vanish: bool,
}

/// Substitutes `x = u − a0/a1`, `y = v − b0/b1` and re-expands.
///
/// The shift only cancels the constants in general when the linear cross
/// terms and the quadratic terms do not feed back into them, so the result
/// reports whether the transformed constants are zero instead of assuming
/// it. A coordinate whose constant is already zero is left unshifted.
pub fn to_normal_form(ode: &QuadraticODE) -> Result<NormalForm> {
    let zero = ExactRational::zero();
    if ode.is_normal_form() {
        return Ok(NormalForm { ode: ode.clone(), shift: (zero.clone(), zero), constants_vanish: true });
    }
    let (a0, a1, b0, b1) = (ode.a(0), ode.a(1), ode.b(0), ode.b(1));
    if !a0.is_zero() && a1.is_zero() {
        return Err(Error::DegenerateParameter("a1".into()));
    }
    if !b0.is_zero() && b1.is_zero() {
        return Err(Error::DegenerateParameter("b1".into()));
    }
    let su = if a0.is_zero() { zero.clone() } else { -(a0 / a1) };
    let sv = if b0.is_zero() { zero } else { -(b0 / b1) };
    let (p1, p2) = ode.rhs::<QuadExt>();
    let (su_q, sv_q) = (QuadExt::rational(su.clone()), QuadExt::rational(sv.clone()));
    let (p1, p2) = (p1.shift(&su_q, &sv_q), p2.shift(&su_q, &sv_q));
    let read = |p: &crate::poly::BivariatePoly<QuadExt>| -> [ExactRational; 6] {
        MONOMIALS.map(|e| p.coeff(e).as_rational().cloned().expect("rational input stays rational"))
    };
    let shifted = QuadraticODE::from_full(read(&p1), read(&p2));
    let constants_vanish = shifted.is_normal_form();
    Ok(NormalForm { ode: shifted, shift: (su, sv), constants_vanish })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn ode(a: [&str; 5], b: [&str; 5]) -> QuadraticODE {
        QuadraticODE::parse(a, b).unwrap()
    }

    fn l_example() -> QuadraticODE {
        ode(["1", "-2", "2", "1", "0"], ["3", "1", "0", "2", "1"])
    }

    fn x_example() -> QuadraticODE {
        ode(["-4", "-2", "1", "0", "-2/3"], ["3", "1", "0", "2", "5/3"])
    }

    #[test]
    fn l_membership() {
        assert!(membership_l(&l_example()).unwrap().0);
        let (inside, r) = membership_l(&x_example()).unwrap();
        assert!(!inside);
        assert_eq!(r[2], ratio(-5, 3));
        let linear = ode(["1", "2", "0", "0", "0"], ["3", "4", "0", "0", "0"]);
        assert!(membership_l(&linear).unwrap().0);
    }

    #[test]
    fn x_membership() {
        assert!(membership_x(&x_example()).unwrap().0);
        let (inside, r) = membership_x(&l_example()).unwrap();
        assert!(!inside);
        assert_eq!(r[0], int(-2));
        let zero = ode(["0"; 5], ["0"; 5]);
        assert!(membership_x(&zero).unwrap().0);
    }

    #[test]
    fn membership_requires_normal_form() {
        let general = QuadraticODE::with_constants(
            int(1),
            [int(0), int(0), int(0), int(0), int(0)],
            int(0),
            [int(0), int(0), int(0), int(0), int(0)],
        );
        assert!(matches!(membership_l(&general), Err(Error::NotNormalForm { .. })));
        assert!(matches!(membership_x(&general), Err(Error::NotNormalForm { .. })));
    }

    #[test]
    fn classify_reports_violations() {
        let m = classify(&l_example()).unwrap();
        assert!(m.in_l && !m.in_x);
        assert_eq!(m.preferred(), Some(Family::L));
        assert!(m.violated.iter().all(|v| v.family == Family::X));
        assert!(m.violated.iter().any(|v| v.index == 0 && v.value == int(-2)));
        let both = classify(&ode(["0"; 5], ["0"; 5])).unwrap();
        assert!(both.in_l && both.in_x && both.violated.is_empty());
        assert_eq!(both.preferred(), Some(Family::L));
    }

    #[test]
    fn tolerant_membership() {
        let perturbed = ode(["1", "-2", "2", "1", "1e-12"], ["3", "1", "0", "2", "1"]);
        let m = classify(&perturbed).unwrap();
        assert!(!m.in_l);
        assert_eq!(m.within(1e-9), (true, false));
    }

    #[test]
    fn x_parameterization_reproduces_examples() {
        assert_eq!(x_parameterization(&FreeParams::from_ints([-4, -2, 0, 3, 1, 2])).unwrap(), x_example());
        let second = ode(["-3", "-2", "1", "0", "-2/3"], ["3", "1", "0", "2", "4/3"]);
        assert_eq!(x_parameterization(&FreeParams::from_ints([-3, -2, 0, 3, 1, 2])).unwrap(), second);
        let third = ode(["-1", "2", "1", "1", "-3/2"], ["-2", "1", "-1/2", "3", "-1"]);
        assert_eq!(x_parameterization(&FreeParams::from_ints([-1, 2, 1, -2, 1, 3])).unwrap(), third);
    }

    #[test]
    fn x_parameterization_degenerate() {
        assert_eq!(
            x_parameterization(&FreeParams::from_ints([1, 0, 1, 1, 1, 1])),
            Err(Error::DegenerateParameter("a2".into()))
        );
        assert_eq!(
            x_parameterization(&FreeParams::from_ints([1, 1, 1, 0, 1, 1])),
            Err(Error::DegenerateParameter("b1".into()))
        );
    }

    #[test]
    fn l_parameterization_is_in_l() {
        let l = l_parameterization(&FreeParams::from_ints([1, -2, 1, 3, 1, 2]));
        assert_eq!(l, l_example());
    }

    #[test]
    fn normal_form_identity() {
        let nf = to_normal_form(&l_example()).unwrap();
        assert_eq!(nf.ode, l_example());
        assert_eq!(nf.shift, (int(0), int(0)));
        assert!(nf.constants_vanish);
    }

    #[test]
    fn normal_form_shifts_affine_growth() {
        // dx/dt = 1 + x
        let z = || int(0);
        let general =
            QuadraticODE::with_constants(int(1), [int(1), z(), z(), z(), z()], z(), [z(), z(), z(), z(), z()]);
        let nf = to_normal_form(&general).unwrap();
        assert_eq!(nf.shift, (int(-1), int(0)));
        assert!(nf.constants_vanish);
        assert_eq!(nf.ode, QuadraticODE::new([int(1), z(), z(), z(), z()], [z(), z(), z(), z(), z()]));
    }

    #[test]
    fn normal_form_reports_leftover_constants() {
        // dx/dt = 1 + x + x²: the quadratic term feeds a constant back in
        let z = || int(0);
        let general =
            QuadraticODE::with_constants(int(1), [int(1), z(), int(1), z(), z()], z(), [z(), z(), z(), z(), z()]);
        let nf = to_normal_form(&general).unwrap();
        assert!(!nf.constants_vanish);
        assert_eq!(*nf.ode.a(0), int(1));
    }

    #[test]
    fn normal_form_of_box_system() {
        // dx/dt = xy, dy/dt = y² − x − 1 becomes dx/dt = −x + xv, dv/dt = −x − 2v + v²
        let z = || int(0);
        let box_ode =
            QuadraticODE::with_constants(z(), [z(), z(), z(), int(1), z()], int(-1), [int(-1), z(), z(), z(), int(1)]);
        let nf = to_normal_form(&box_ode).unwrap();
        assert_eq!(nf.shift, (int(0), int(-1)));
        assert!(nf.constants_vanish);
        assert_eq!(nf.ode, QuadraticODE::new([int(-1), z(), z(), int(1), z()], [int(-1), int(-2), z(), z(), int(1)]));
        assert!(membership_l(&nf.ode).unwrap().0);
    }

    #[test]
    fn normal_form_rejects_missing_linear_term() {
        // dx/dt = 1 + y
        let z = || int(0);
        let ode = QuadraticODE::with_constants(int(1), [z(), int(1), z(), z(), z()], z(), [z(), z(), z(), z(), z()]);
        assert_eq!(to_normal_form(&ode), Err(Error::DegenerateParameter("a1".into())));
    }
}
