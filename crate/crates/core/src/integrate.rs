//! Explicit Runge–Kutta integration of the raw vector field.
//!
//! The adaptive method is the Dormand–Prince 5(4) pair with FSAL and a PI
//! step-size controller. A fixed-step classical RK4 is available for
//! deterministic fixtures. Integration never panics on blow-up: when the
//! step size underflows `1e-14·max(|t|, 1)` or the state stops being finite,
//! the run ends with `failed` set and the last accepted time recorded.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{FloatField, QuadraticODE};
use crate::solution::{InitialCondition, TrajectorySample};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Method {
    DormandPrince,
    /// Classical RK4 with a fixed step (the last step is shortened to land on `t1`).
    Rk4 {
        step: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// `(t0, t1)`; `t1 < t0` integrates backwards.
    pub t_span: (f64, f64),
    pub max_steps: usize,
    pub method: Method,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            t_span: (0.0, 1.0),
            max_steps: 1_000_000,
            method: Method::DormandPrince,
        }
    }
}

impl IntegratorConfig {
    pub fn over(t0: f64, t1: f64) -> Self {
        Self { t_span: (t0, t1), ..Self::default() }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (t0, t1) = self.t_span;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad(format!("tolerances must be positive (rel {}, abs {})", self.rel_tol, self.abs_tol));
        }
        if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
            return bad(format!("t_span must be finite with t1 != t0, got ({t0}, {t1})"));
        }
        if self.max_step.is_nan() || self.max_step <= 0.0 {
            return bad(format!("max_step must be positive, got {}", self.max_step));
        }
        if let Method::Rk4 { step } = self.method {
            if !(step > 0.0 && step.is_finite()) {
                return bad(format!("RK4 step must be positive, got {step}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Failure {
    StepUnderflow,
    NonFinite,
    MaxSteps,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Integration {
    /// `(t, x, y)` at the start and after every accepted step.
    pub points: Vec<(f64, f64, f64)>,
    pub n_steps: usize,
    pub n_rejected: usize,
    pub failure: Option<Failure>,
}

impl Integration {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    /// Last accepted time.
    pub fn last_time(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.0)
    }

    pub fn failure_time(&self) -> Option<f64> {
        self.failed().then(|| self.last_time())
    }

    pub fn samples(&self) -> Vec<TrajectorySample> {
        self.points.iter().map(|&(t, x, y)| TrajectorySample { t, x, y, im_residual: 0.0, near_pole: false }).collect()
    }
}

pub fn integrate(ode: &QuadraticODE, ic: &InitialCondition, cfg: &IntegratorConfig) -> Result<Integration> {
    let (x0, y0) = ic.to_f64();
    integrate_field(&ode.to_f64(), [x0, y0], cfg)
}

pub fn integrate_field(field: &FloatField, y0: [f64; 2], cfg: &IntegratorConfig) -> Result<Integration> {
    cfg.validate()?;
    Ok(match cfg.method {
        Method::DormandPrince => dopri5(field, y0, cfg),
        Method::Rk4 { step } => rk4(field, y0, cfg, step),
    })
}

type State = [f64; 2];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

fn finite(y: &State) -> bool {
    y.iter().all(|v| v.is_finite())
}

fn underflow(h: f64, t: f64) -> bool {
    h.abs() < 1e-14 * t.abs().max(1.0)
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;

fn error_norm(err: &State, y: &State, y_new: &State, cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..2)
        .map(|i| {
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / 2.0).sqrt()
}

fn initial_step(field: &FloatField, y: &State, f0: &State, cfg: &IntegratorConfig, dir: f64) -> f64 {
    let sc = |i: usize| cfg.abs_tol + cfg.rel_tol * y[i].abs();
    let norm = |v: &State| ((0..2).map(|i| (v[i] / sc(i)).powi(2)).sum::<f64>() / 2.0).sqrt();
    let (d0, d1) = (norm(y), norm(f0));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, dir * h0, &[(1.0, f0)]);
    let f1 = field.eval(y1[0], y1[1]);
    let diff = [f1[0] - f0[0], f1[1] - f0[1]];
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(cfg.max_step)
}

fn dopri5(field: &FloatField, y0: State, cfg: &IntegratorConfig) -> Integration {
    let (t0, t1) = cfg.t_span;
    let dir = (t1 - t0).signum();
    let f = |y: &State| field.eval(y[0], y[1]);
    let mut out = Integration { points: vec![(t0, y0[0], y0[1])], n_steps: 0, n_rejected: 0, failure: None };
    if !finite(&y0) {
        out.failure = Some(Failure::NonFinite);
        return out;
    }
    let (mut t, mut y) = (t0, y0);
    let mut k1 = f(&y);
    let mut h = initial_step(field, &y, &k1, cfg, dir).min((t1 - t0).abs());
    let mut err_old = 1e-4_f64;
    let mut rejected_last = false;
    loop {
        if (t1 - t) * dir <= 0.0 {
            return out;
        }
        if out.n_steps + out.n_rejected >= cfg.max_steps {
            out.failure = Some(Failure::MaxSteps);
            return out;
        }
        let last = (t + dir * h - t1) * dir >= 0.0;
        if last {
            h = (t1 - t).abs();
        }
        if underflow(h, t) {
            out.failure = Some(Failure::StepUnderflow);
            return out;
        }
        let hs = dir * h;
        let k2 = f(&axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(&axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(&y_new);
        let e = axpy(&[0.0, 0.0], hs, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        let err = error_norm(&e, &y, &y_new, cfg);
        if !err.is_finite() || !finite(&y_new) || !finite(&k7) {
            out.n_rejected += 1;
            rejected_last = true;
            h *= FAC_MIN;
            continue;
        }
        if err <= 1.0 {
            let t_new = if last { t1 } else { t + hs };
            t = t_new;
            y = y_new;
            k1 = k7;
            out.n_steps += 1;
            out.points.push((t, y[0], y[1]));
            let mut fac = SAFETY * err.max(1e-10).powf(-ALPHA) * err_old.powf(BETA);
            fac = fac.clamp(FAC_MIN, if rejected_last { 1.0 } else { FAC_MAX });
            h = (h * fac).min(cfg.max_step);
            err_old = err.max(1e-4);
            rejected_last = false;
        } else {
            out.n_rejected += 1;
            rejected_last = true;
            h *= (SAFETY * err.powf(-ALPHA)).max(FAC_MIN);
        }
    }
}

fn rk4(field: &FloatField, y0: State, cfg: &IntegratorConfig, step: f64) -> Integration {
    let (t0, t1) = cfg.t_span;
    let dir = (t1 - t0).signum();
    let f = |y: &State| field.eval(y[0], y[1]);
    let mut out = Integration { points: vec![(t0, y0[0], y0[1])], n_steps: 0, n_rejected: 0, failure: None };
    let n = ((t1 - t0).abs() / step).ceil() as usize;
    let mut y = y0;
    for i in 0..n {
        if i >= cfg.max_steps {
            out.failure = Some(Failure::MaxSteps);
            return out;
        }
        let t = t0 + dir * step * i as f64;
        let t_next = if i + 1 == n { t1 } else { t0 + dir * step * (i + 1) as f64 };
        let h = t_next - t;
        let k1 = f(&y);
        let k2 = f(&axpy(&y, h, &[(0.5, &k1)]));
        let k3 = f(&axpy(&y, h, &[(0.5, &k2)]));
        let k4 = f(&axpy(&y, h, &[(1.0, &k3)]));
        let y_new = axpy(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
        if !finite(&y_new) {
            out.failure = Some(Failure::NonFinite);
            return out;
        }
        y = y_new;
        out.n_steps += 1;
        out.points.push((t_next, y[0], y[1]));
    }
    out
}
