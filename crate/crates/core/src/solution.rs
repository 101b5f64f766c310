//! Closed-form trajectories from two independent eigenpairs.
//!
//! With `φ1 = (c0 + c1 x + c2 y)/(d0 + d1 x + d2 y)` and
//! `φ2 = (k0 + k1 x + k2 y)/(m0 + m1 x + m2 y)`, both level-set equations are
//! linear in `(x, y)`:
//!
//! ```text
//! x = −[(c2 − d2φ1)(k0 − m0φ2) − (c0 − d0φ1)(k2 − m2φ2)] / den
//! y =  [(c1 − d1φ1)(k0 − m0φ2) − (c0 − d0φ1)(k1 − m1φ2)] / den
//! den = (c2 − d2φ1)(k1 − m1φ2) − (c1 − d1φ1)(k2 − m2φ2)
//! ```
//!
//! Substituting `φi(t) = φi(x0, y0)·e^{λi t}` gives `x(t), y(t)`. The
//! evaluation runs in complex doubles; for real data the imaginary parts
//! cancel and what is left is reported as `im_residual`.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::batch::{self, Execution};
use crate::eigenfunction::{Eigenpair, RationalEigenfunction};
use crate::eigensolver::{self, FamilySpectrum};
use crate::error::{Error, Result};
use crate::exact::rational::{self, ExactRational};
use crate::exact::QuadExt;
use crate::family;
use crate::ode::QuadraticODE;
use crate::scalar::Scalar;

/// Default scan step and bisection width of [`ClosedFormSolution::blowup_time`].
pub const BLOWUP_SCAN_STEP: f64 = 1e-3;
pub const BLOWUP_BISECT_TOL: f64 = 1e-8;
/// Default `|den|` below which a sample is flagged near-pole.
pub const NEAR_POLE_RADIUS: f64 = 1e-9;
/// Allowed `|Im den| / max(1, |den|)` after the phase rotation in the blow-up scan.
pub const DENOMINATOR_REALNESS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialCondition {
    #[serde(with = "rational::serde_text")]
    pub x0: ExactRational,
    #[serde(with = "rational::serde_text")]
    pub y0: ExactRational,
}

impl InitialCondition {
    pub fn new(x0: ExactRational, y0: ExactRational) -> Self {
        Self { x0, y0 }
    }

    /// Exact binary value of two finite doubles.
    pub fn from_f64(x0: f64, y0: f64) -> Result<Self> {
        Ok(Self { x0: rational::from_f64(x0)?, y0: rational::from_f64(y0)? })
    }

    pub fn from_ints(x0: i64, y0: i64) -> Self {
        Self { x0: rational::int(x0), y0: rational::int(y0) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational::to_f64(&self.x0), rational::to_f64(&self.y0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Largest imaginary part dropped from `x` or `y`.
    pub im_residual: f64,
    pub near_pole: bool,
}

/// A zero of the shared denominator on the time axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DenominatorRoot {
    pub t: f64,
    /// Both numerators vanish there too, so the state stays finite.
    pub removable: bool,
}

/// `x = num_x/den`, `y = num_y/den` at one set of eigenfunction values.
#[derive(Clone, Copy, Debug)]
struct Inversion<S> {
    num_x: S,
    num_y: S,
    den: S,
    /// Sum of the moduli of the products forming the numerators.
    scale: f64,
}

fn inversion_parts<S: Scalar>(
    ef1: &RationalEigenfunction<S>,
    ef2: &RationalEigenfunction<S>,
    phi1: &S,
    phi2: &S,
) -> Inversion<S> {
    let row = |ef: &RationalEigenfunction<S>, phi: &S| -> [S; 3] {
        std::array::from_fn(|i| ef.c[i].clone() - ef.d[i].clone() * phi.clone())
    };
    let [c0, c1, c2] = row(ef1, phi1);
    let [k0, k1, k2] = row(ef2, phi2);
    let products = [c2.clone() * k0.clone(), c0.clone() * k2.clone(), c1.clone() * k0, c0 * k1.clone()];
    let scale = products.iter().map(|p| p.to_complex().norm()).sum();
    let [p_ak0, p_ck2, p_bk0, p_ck1] = products;
    Inversion { num_x: -(p_ak0 - p_ck2), num_y: p_bk0 - p_ck1, den: c2 * k1 - c1 * k2, scale }
}

/// The point where `φ1 = phi1` and `φ2 = phi2`.
pub fn invert<S: Scalar>(
    ef1: &RationalEigenfunction<S>,
    ef2: &RationalEigenfunction<S>,
    phi1: &S,
    phi2: &S,
) -> Result<(S, S)> {
    let inv = inversion_parts(ef1, ef2, phi1, phi2);
    if inv.den.is_negligible() {
        return Err(Error::InversionSingularity);
    }
    Ok((inv.num_x.checked_div(&inv.den)?, inv.num_y.checked_div(&inv.den)?))
}

/// `P(x, y)/Q(x, y)`, with a pole error when `Q` vanishes.
pub fn eval_eigenfunction<S: Scalar>(ef: &RationalEigenfunction<S>, x: &S, y: &S) -> Result<S> {
    ef.eval(x, y)
}

/// False when one eigenfunction is `α·φ` or `α/φ` of the other.
pub fn independence_check<S: Scalar>(p1: &Eigenpair<S>, p2: &Eigenpair<S>) -> bool {
    eigensolver::independent(p1, p2)
}

/// Moves an eigenfunction of the shifted system `x = u + su`, `y = v + sv`
/// back to the original coordinates.
fn unshift(
    ef: &RationalEigenfunction<QuadExt>,
    su: &ExactRational,
    sv: &ExactRational,
) -> RationalEigenfunction<QuadExt> {
    let back = |v: &[QuadExt; 3]| -> [QuadExt; 3] {
        let c0 = &v[0] - &(v[1].scale(su) + v[2].scale(sv));
        [c0, v[1].clone(), v[2].clone()]
    };
    RationalEigenfunction::new(back(&ef.c), back(&ef.d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormSolution {
    pub pair1: Eigenpair<QuadExt>,
    pub pair2: Eigenpair<QuadExt>,
    /// `φ1(x0, y0)`, `φ2(x0, y0)`.
    pub phi1_0: QuadExt,
    pub phi2_0: QuadExt,
    pub ic: InitialCondition,
    /// Family spectrum when the pairs came from the classifier.
    pub spectrum: Option<FamilySpectrum>,
    pub near_pole_radius: f64,
    complex: [Eigenpair<Complex64>; 2],
    phi0: [Complex64; 2],
}

/// Classifies `ode`, computes its eigenpairs and fixes the initial
/// condition. Systems with constant terms are accepted when the
/// normal-form shift removes them.
pub fn build_solution(ode: &QuadraticODE, ic: &InitialCondition) -> Result<ClosedFormSolution> {
    let (solved, shift) = if ode.is_normal_form() {
        (eigensolver::solve_family(ode, None)?, None)
    } else {
        let nf = family::to_normal_form(ode)?;
        nf.ode.require_normal_form()?;
        (eigensolver::solve_family(&nf.ode, None)?, Some(nf.shift))
    };
    let [p1, p2] = solved.pairs;
    let (p1, p2) = match shift {
        None => (p1, p2),
        Some((su, sv)) => {
            (Eigenpair::new(p1.lambda, unshift(&p1.ef, &su, &sv)), Eigenpair::new(p2.lambda, unshift(&p2.ef, &su, &sv)))
        }
    };
    let mut sol = from_pairs(p1, p2, ic)?;
    sol.spectrum = Some(solved.spectrum);
    Ok(sol)
}

/// Solution from two given eigenpairs, without classification.
pub fn from_pairs(
    pair1: Eigenpair<QuadExt>,
    pair2: Eigenpair<QuadExt>,
    ic: &InitialCondition,
) -> Result<ClosedFormSolution> {
    if !independence_check(&pair1, &pair2) {
        return Err(Error::DependentEigenfunctions);
    }
    let (x0, y0) = (QuadExt::rational(ic.x0.clone()), QuadExt::rational(ic.y0.clone()));
    let phi1_0 = pair1.ef.eval(&x0, &y0)?;
    let phi2_0 = pair2.ef.eval(&x0, &y0)?;
    let (xr, yr) = invert(&pair1.ef, &pair2.ef, &phi1_0, &phi2_0)?;
    if xr != x0 || yr != y0 {
        return Err(Error::InternalConsistency(format!(
            "inversion at t = 0 gives ({xr}, {yr}), not the initial condition"
        )));
    }
    let complex = [pair1.to_complex(), pair2.to_complex()];
    let phi0 = [phi1_0.to_complex(), phi2_0.to_complex()];
    Ok(ClosedFormSolution {
        pair1,
        pair2,
        phi1_0,
        phi2_0,
        ic: ic.clone(),
        spectrum: None,
        near_pole_radius: NEAR_POLE_RADIUS,
        complex,
        phi0,
    })
}

impl ClosedFormSolution {
    pub fn with_near_pole_radius(mut self, radius: f64) -> Self {
        self.near_pole_radius = radius;
        self
    }

    pub fn pairs_complex(&self) -> &[Eigenpair<Complex64>; 2] {
        &self.complex
    }

    /// `φ1(x0, y0)`, `φ2(x0, y0)` as complex doubles.
    pub fn phi0(&self) -> [Complex64; 2] {
        self.phi0
    }

    /// The initial condition lies on a numerator zero line, so one
    /// eigenfunction coordinate stays zero for all time.
    pub fn has_degenerate_coordinate(&self) -> bool {
        self.phi1_0.is_zero() || self.phi2_0.is_zero()
    }

    /// `φi(0)·e^{λi t}`.
    pub fn eigen_coordinates(&self, t: f64) -> [Complex64; 2] {
        std::array::from_fn(|i| self.phi0[i] * (self.complex[i].lambda * t).exp())
    }

    fn parts(&self, t: f64) -> Inversion<Complex64> {
        let [phi1, phi2] = self.eigen_coordinates(t);
        inversion_parts(&self.complex[0].ef, &self.complex[1].ef, &phi1, &phi2)
    }

    /// Shared denominator of `x(t)` and `y(t)`.
    pub fn denominator(&self, t: f64) -> Complex64 {
        self.parts(t).den
    }

    /// Complex state at time `t`.
    pub fn state(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let [phi1, phi2] = self.eigen_coordinates(t);
        invert(&self.complex[0].ef, &self.complex[1].ef, &phi1, &phi2).map_err(|_| Error::PoleAtTime(t))
    }

    /// At `t = 0` the inversion is exact and returns the initial condition.
    pub fn sample(&self, t: f64) -> TrajectorySample {
        if t == 0.0 {
            let (x, y) = self.ic.to_f64();
            return TrajectorySample { t, x, y, im_residual: 0.0, near_pole: false };
        }
        let p = self.parts(t);
        let near_pole = p.den.norm() < self.near_pole_radius;
        let (x, y) = if p.den == Complex64::new(0.0, 0.0) {
            (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0))
        } else {
            (p.num_x / p.den, p.num_y / p.den)
        };
        TrajectorySample { t, x: x.re, y: y.re, im_residual: x.im.abs().max(y.im.abs()), near_pole }
    }

    pub fn evaluate_trajectory(&self, times: &[f64]) -> Vec<TrajectorySample> {
        self.evaluate_trajectory_with(times, Execution::default())
    }

    pub fn evaluate_trajectory_with(&self, times: &[f64], exec: Execution) -> Vec<TrajectorySample> {
        batch::map(times, exec, |&t| self.sample(t))
    }

    /// Earliest non-removable denominator root in `(0, t_max]`.
    pub fn blowup_time(&self, t_max: f64) -> Result<Option<f64>> {
        Ok(self.denominator_roots(t_max, BLOWUP_SCAN_STEP)?.into_iter().find(|r| !r.removable).map(|r| r.t))
    }

    /// Sign changes of the phase-aligned denominator on `(0, t_max]`,
    /// refined by bisection to [`BLOWUP_BISECT_TOL`].
    ///
    /// For complex spectra the denominator has a constant phase (it is
    /// purely imaginary for conjugate pairs), so it is rotated by the phase
    /// at `t = 0` and the real part is scanned. A remaining imaginary part
    /// above [`DENOMINATOR_REALNESS_TOL`] is an internal-consistency error.
    pub fn denominator_roots(&self, t_max: f64, step: f64) -> Result<Vec<DenominatorRoot>> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_max must be positive and finite, got {t_max}")));
        }
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidConfig(format!("scan step must be positive, got {step}")));
        }
        let den0 = self.denominator(0.0);
        let phase = den0 / den0.norm();
        let g = |t: f64| -> Result<f64> {
            let d = self.denominator(t) * phase.conj();
            if d.im.abs() > DENOMINATOR_REALNESS_TOL * d.norm().max(1.0) {
                return Err(Error::InternalConsistency(format!(
                    "denominator is not real up to a constant phase at t = {t}: {d}"
                )));
            }
            Ok(d.re)
        };
        let n = (t_max / step).ceil() as usize;
        let mut roots = Vec::new();
        let (mut t_prev, mut g_prev) = (0.0, g(0.0)?);
        for i in 1..=n {
            let t = (i as f64 * step).min(t_max);
            let g_now = g(t)?;
            if !g_now.is_finite() {
                break;
            }
            if g_now == 0.0 {
                roots.push(self.classify_root(t));
            } else if g_prev != 0.0 && g_prev.signum() != g_now.signum() {
                let (mut lo, mut hi, mut g_lo) = (t_prev, t, g_prev);
                while hi - lo > BLOWUP_BISECT_TOL {
                    let mid = 0.5 * (lo + hi);
                    let g_mid = g(mid)?;
                    if g_mid == 0.0 {
                        (lo, hi) = (mid, mid);
                    } else if g_mid.signum() == g_lo.signum() {
                        (lo, g_lo) = (mid, g_mid);
                    } else {
                        hi = mid;
                    }
                }
                roots.push(self.classify_root(0.5 * (lo + hi)));
            }
            (t_prev, g_prev) = (t, g_now);
        }
        Ok(roots)
    }

    fn classify_root(&self, t: f64) -> DenominatorRoot {
        let p = self.parts(t);
        let removable = p.num_x.norm() + p.num_y.norm() <= 1e-6 * p.scale.max(1.0);
        DenominatorRoot { t, removable }
    }
}

/// Writes `t,x,y,im_residual,near_pole` rows with 17 significant digits.
pub fn write_csv<W: Write>(samples: &[TrajectorySample], mut out: W) -> io::Result<()> {
    writeln!(out, "t,x,y,im_residual,near_pole")?;
    for s in samples {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{}", s.t, s.x, s.y, s.im_residual, s.near_pole)?;
    }
    Ok(())
}

/// `n` evenly spaced times covering `[t0, t1]` inclusive.
pub fn time_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect(),
    }
}
