//! The worked examples: four normal-form systems (one in L, three in X) and
//! the box system `dx/dt = xy`, `dy/dt = y² − x − 1`, together with their
//! published eigenpairs, eigenfunction initial values, closed-form
//! trajectories and blow-up time.

use crate::eigenfunction::{Eigenpair, RationalEigenfunction};
use crate::exact::rational::{int, ratio, ExactRational};
use crate::exact::QuadExt;
use crate::family::{self, Family, FreeParams};
use crate::ode::QuadraticODE;
use crate::solution::InitialCondition;

/// Published quantities for one example.
#[derive(Clone, Debug)]
pub struct Printed {
    pub family: Option<Family>,
    pub pairs: [Eigenpair<QuadExt>; 2],
    pub phi0: [QuadExt; 2],
    pub blowup: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub ode: QuadraticODE,
    pub ic: InitialCondition,
    pub printed: Printed,
    /// Published closed form `(x(t), y(t))` for this initial condition.
    pub closed_form: fn(&InitialCondition, f64) -> (f64, f64),
}

/// `rat + rad·√radicand`.
fn qe(rat: ExactRational, rad: ExactRational, radicand: i64) -> QuadExt {
    QuadExt::new(rat, rad, int(radicand))
}

fn n(v: i64) -> QuadExt {
    QuadExt::from_int(v)
}

fn pair(lambda: QuadExt, c: [QuadExt; 3], d: [QuadExt; 3]) -> Eigenpair<QuadExt> {
    Eigenpair::new(lambda, RationalEigenfunction::new(c, d))
}

fn ode(a: [&str; 5], b: [&str; 5]) -> QuadraticODE {
    QuadraticODE::parse(a, b).expect("literal coefficients")
}

/// L system `dx = x − 2y + 2x² + xy`, `dy = 3x + y + 2xy + y²` from `(0, 1)`.
pub fn l_example() -> Example {
    let root6 = |c: ExactRational| qe(int(0), c, -6);
    Example {
        name: "L example",
        ode: ode(["1", "-2", "2", "1", "0"], ["3", "1", "0", "2", "1"]),
        ic: InitialCondition::from_ints(0, 1),
        printed: Printed {
            family: Some(Family::L),
            pairs: [
                pair(qe(int(1), int(-1), -6), [n(0), n(1), root6(ratio(-1, 3))], [n(-7), n(1), n(-5)]),
                pair(root6(int(2)), [n(0), n(3), root6(int(1))], [n(0), n(3), root6(int(-1))]),
            ],
            phi0: [root6(ratio(1, 36)), n(-1)],
            blowup: Some(2.10895),
        },
        closed_form: l_closed_form,
    }
}

/// X system `dx = −4x − 2y + x² − 2/3 y²`, `dy = 3x + y + 2xy + 5/3 y²` from `(−3, −4)`.
pub fn x_example_1() -> Example {
    Example {
        name: "X example 1",
        ode: ode(["-4", "-2", "1", "0", "-2/3"], ["3", "1", "0", "2", "5/3"]),
        ic: InitialCondition::from_ints(-3, -4),
        printed: Printed {
            family: Some(Family::X),
            pairs: [
                pair(n(1), [n(-1), n(1), n(1)], [n(0), n(1), n(1)]),
                pair(n(2), [n(-6), n(3), n(2)], [n(0), n(3), n(2)]),
            ],
            phi0: [QuadExt::rational(ratio(8, 7)), QuadExt::rational(ratio(23, 17))],
            blowup: None,
        },
        closed_form: x1_closed_form,
    }
}

/// X system `dx = −3x − 2y + x² − 2/3 y²`, `dy = 3x + y + 2xy + 4/3 y²` from `(2, −1)`.
pub fn x_example_2() -> Example {
    let r2 = |rat: i64, rad: i64| qe(int(rat), int(rad), -2);
    // (i − 2√2)/(4i + √2) multiplied through by i
    let phi1 = r2(-1, -2) / r2(-4, 1);
    Example {
        name: "X example 2",
        ode: ode(["-3", "-2", "1", "0", "-2/3"], ["3", "1", "0", "2", "4/3"]),
        ic: InitialCondition::from_ints(2, -1),
        printed: Printed {
            family: Some(Family::X),
            pairs: [
                pair(r2(1, -1), [r2(-3, 3), n(3), r2(2, 1)], [n(0), n(3), r2(2, 1)]),
                pair(r2(1, 1), [r2(-3, -3), n(3), r2(2, -1)], [n(0), n(3), r2(2, -1)]),
            ],
            phi0: [phi1.clone(), phi1.conj()],
            blowup: None,
        },
        closed_form: x2_closed_form,
    }
}

/// X system with free coordinates `(a1, a2, a4, b1, b2, b4) = (−1, 2, 1, −2, 1, 3)` from `(2, −1)`.
pub fn x_example_3() -> Example {
    let r3 = |rat: i64, rad: i64| qe(int(rat), int(rad), -3);
    // (41i − 17√3)/(35i − 7√3) multiplied through by i
    let phi1 = r3(41, 17) / r3(35, 7);
    let ode = family::x_parameterization(&FreeParams::from_ints([-1, 2, 1, -2, 1, 3])).expect("nondegenerate");
    Example {
        name: "X example 3",
        ode,
        ic: InitialCondition::from_ints(2, -1),
        printed: Printed {
            family: Some(Family::X),
            pairs: [
                pair(r3(0, -1), [r3(6, 10), n(14), r3(-7, -7)], [n(0), n(14), r3(-7, -7)]),
                pair(r3(0, 1), [r3(6, -10), n(14), r3(-7, 7)], [n(0), n(14), r3(-7, 7)]),
            ],
            phi0: [phi1.clone(), phi1.conj()],
            blowup: None,
        },
        closed_form: x3_closed_form,
    }
}

/// Box system `dx = xy`, `dy = y² − x − 1` from `(1/2, 1/5)`.
pub fn box_example() -> Example {
    Example {
        name: "box example",
        ode: QuadraticODE::with_constants(
            int(0),
            [int(0), int(0), int(0), int(1), int(0)],
            int(-1),
            [int(-1), int(0), int(0), int(0), int(1)],
        ),
        ic: InitialCondition::new(ratio(1, 2), ratio(1, 5)),
        printed: Printed {
            family: None,
            pairs: box_pairs(),
            phi0: [QuadExt::rational(ratio(5, 17)), QuadExt::rational(ratio(5, 13))],
            blowup: None,
        },
        closed_form: box_closed_form,
    }
}

/// `(λ = 1, x/(1 + x + y))` and `(λ = −1, x/(1 + x − y))`.
pub fn box_pairs() -> [Eigenpair<QuadExt>; 2] {
    [pair(n(1), [n(0), n(1), n(0)], [n(1), n(1), n(1)]), pair(n(-1), [n(0), n(1), n(0)], [n(1), n(1), n(-1)])]
}

/// The four normal-form examples.
pub fn worked_examples() -> Vec<Example> {
    vec![l_example(), x_example_1(), x_example_2(), x_example_3()]
}

/// The four normal-form examples followed by the box system.
pub fn all_examples() -> Vec<Example> {
    let mut all = worked_examples();
    all.push(box_example());
    all
}

pub fn l_closed_form(_: &InitialCondition, t: f64) -> (f64, f64) {
    let s6 = 6f64.sqrt();
    let (e, (sn, cs)) = (t.exp(), (s6 * t).sin_cos());
    let (sn2, cs2) = (2.0 * s6 * t).sin_cos();
    let den = 864.0 - 48.0 * e * (15.0 * cs + s6 * sn) + e * e * (77.0 + 73.0 * cs2 + 10.0 * s6 * sn2);
    let x = 14.0 * e * sn * (-12.0 * s6 + e * (5.0 * s6 * cs + 2.0 * sn)) / den;
    let y = -14.0 * e * cs * (-36.0 + e * (15.0 * cs + s6 * sn)) / den;
    (x, y)
}

pub fn x1_closed_form(_: &InitialCondition, t: f64) -> (f64, f64) {
    let e = t.exp();
    let den = 119.0 - 136.0 * e - 161.0 * e * e + 184.0 * e * e * e;
    ((476.0 - 816.0 * e + 322.0 * e * e) / den, (-357.0 + 816.0 * e - 483.0 * e * e) / den)
}

pub fn x2_closed_form(_: &InitialCondition, t: f64) -> (f64, f64) {
    let s2 = 2f64.sqrt();
    let (e, (sn, cs)) = (t.exp(), (s2 * t).sin_cos());
    let den = s2 * (2.0 + e * e) - 4.0 * e * sn;
    (6.0 * (s2 - e * sn) / den, (-6.0 * s2 + 3.0 * e * (s2 * cs + 2.0 * sn)) / den)
}

pub fn x3_closed_form(_: &InitialCondition, t: f64) -> (f64, f64) {
    let s3 = 3f64.sqrt();
    let (sn, cs) = (s3 * t).sin_cos();
    let den = -70.0 * s3 + 64.0 * s3 * cs + 33.0 * sn;
    ((-5.0 + (-798.0 * s3 + 5733.0 * sn) / den) / 64.0, (41.0 + 21.0 * (30.0 * s3 + 91.0 * sn) / den) / 64.0)
}

pub fn box_closed_form(ic: &InitialCondition, t: f64) -> (f64, f64) {
    let (x0, y0) = ic.to_f64();
    let e = t.exp();
    let den = 1.0 + x0 - 2.0 * x0 * e + e * e * (1.0 + x0 - y0) + y0;
    (2.0 * x0 * e / den, (1.0 + x0 + y0 + e * e * (-1.0 - x0 + y0)) / den)
}
