//! Numerical cross-checks of closed-form solutions and eigenpairs against
//! the Runge–Kutta integrator.

use serde::Serialize;

use crate::eigenfunction::Eigenpair;
use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegratorConfig};
use crate::ode::QuadraticODE;
use crate::scalar::Scalar;
use crate::solution::{ClosedFormSolution, InitialCondition};
use num_complex::Complex64;

/// Distance kept from a detected blow-up time when comparing trajectories.
pub const BLOWUP_MARGIN: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub max_abs_err_x: f64,
    pub max_abs_err_y: f64,
    /// Time of the largest error in either coordinate.
    pub t_worst: f64,
    pub n_steps: usize,
    pub integrator_failed: bool,
    pub failure_time: Option<f64>,
    /// Compared interval after truncation.
    pub window: (f64, f64),
    pub blowup_time: Option<f64>,
}

impl CrossCheckReport {
    pub fn max_abs_err(&self) -> f64 {
        self.max_abs_err_x.max(self.max_abs_err_y)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialising plain JSON")
    }
}

/// Integrates `ode` from the solution's initial condition and compares with
/// the closed form at every accepted step. The window starts at `t = 0`
/// and, going forward, stops [`BLOWUP_MARGIN`] before any blow-up.
pub fn cross_check(sol: &ClosedFormSolution, ode: &QuadraticODE, cfg: &IntegratorConfig) -> Result<CrossCheckReport> {
    cfg.validate()?;
    let (t0, mut t1) = cfg.t_span;
    if t0 != 0.0 {
        return Err(Error::InvalidConfig(format!(
            "cross-check starts at the initial condition (t0 = 0), got t0 = {t0}"
        )));
    }
    let blowup_time = if t1 > 0.0 { sol.blowup_time(t1)? } else { None };
    if let Some(tb) = blowup_time {
        t1 = t1.min(tb - BLOWUP_MARGIN);
        if t1 <= 0.0 {
            return Err(Error::InvalidConfig(format!("blow-up at t = {tb} leaves no window to compare")));
        }
    }
    let run = integrate(ode, &sol.ic, &IntegratorConfig { t_span: (0.0, t1), ..*cfg })?;
    let mut report = CrossCheckReport {
        max_abs_err_x: 0.0,
        max_abs_err_y: 0.0,
        t_worst: 0.0,
        n_steps: run.n_steps,
        integrator_failed: run.failed(),
        failure_time: run.failure_time(),
        window: (0.0, t1),
        blowup_time,
    };
    let mut worst = -1.0;
    for &(t, x, y) in &run.points {
        let s = sol.sample(t);
        let (ex, ey) = ((s.x - x).abs(), (s.y - y).abs());
        report.max_abs_err_x = report.max_abs_err_x.max(ex);
        report.max_abs_err_y = report.max_abs_err_y.max(ey);
        if ex.max(ey) > worst {
            worst = ex.max(ey);
            report.t_worst = t;
        }
    }
    Ok(report)
}

/// Largest `|φ(x(t), y(t)) − φ(x0, y0)·e^{λt}|` over the accepted steps of a
/// numerical trajectory. Works for systems with constant terms.
pub fn linearity_check<S: Scalar>(
    ode: &QuadraticODE,
    pair: &Eigenpair<S>,
    ic: &InitialCondition,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let pair = pair.to_complex();
    let run = integrate(ode, ic, cfg)?;
    if let Some(t) = run.failure_time() {
        return Err(Error::IntegrationFailed(t));
    }
    let at = |x: f64, y: f64| pair.ef.eval(&Complex64::new(x, 0.0), &Complex64::new(y, 0.0));
    let (x0, y0) = ic.to_f64();
    let phi0 = at(x0, y0)?;
    run.points.iter().try_fold(0.0_f64, |acc, &(t, x, y)| {
        let phi = at(x, y).map_err(|_| Error::PoleAtTime(t))?;
        Ok(acc.max((phi - phi0 * (pair.lambda * t).exp()).norm()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::rational::ratio;
    use crate::exact::QuadExt;
    use crate::solution::build_solution;

    #[test]
    fn box_pairs_are_linear_along_trajectories() {
        let ex = catalog::box_example();
        let cfg = IntegratorConfig::over(0.0, 1.0);
        for p in catalog::box_pairs() {
            let r = linearity_check(&ex.ode, &p, &ex.ic, &cfg).unwrap();
            assert!(r < 1e-8, "{r}");
        }
        let origin = InitialCondition::from_ints(0, 0);
        assert_eq!(linearity_check(&ex.ode, &catalog::box_pairs()[0], &origin, &cfg).unwrap(), 0.0);
        let mut wrong = catalog::box_pairs()[0].clone();
        wrong.lambda = QuadExt::from_int(2);
        assert!(linearity_check(&ex.ode, &wrong, &ex.ic, &cfg).unwrap() > 1e-2);
    }

    #[test]
    fn linearity_reports_pole_at_ic() {
        let ex = catalog::box_example();
        let ic = InitialCondition::new(ratio(-1, 2), ratio(-1, 2));
        let err = linearity_check(&ex.ode, &catalog::box_pairs()[0], &ic, &IntegratorConfig::over(0.0, 1.0));
        assert!(matches!(err, Err(Error::Pole { .. })));
    }

    #[test]
    fn cross_checks() {
        let x1 = catalog::x_example_1();
        let sol = build_solution(&x1.ode, &x1.ic).unwrap();
        let r = cross_check(&sol, &x1.ode, &IntegratorConfig::over(0.0, 3.0)).unwrap();
        assert!(r.max_abs_err() < 1e-6, "{r:?}");
        assert!(!r.integrator_failed);

        let l = catalog::l_example();
        let sol = build_solution(&l.ode, &l.ic).unwrap();
        let r = cross_check(&sol, &l.ode, &IntegratorConfig::over(0.0, 3.0)).unwrap();
        assert!((r.window.1 - (2.10895 - BLOWUP_MARGIN)).abs() < 1e-3, "{r:?}");
        assert!(r.max_abs_err() < 1e-4);
        assert!(cross_check(&sol, &l.ode, &IntegratorConfig::over(1.0, 3.0)).is_err());
    }

    #[test]
    fn report_json() {
        let x3 = catalog::x_example_3();
        let sol = build_solution(&x3.ode, &x3.ic).unwrap();
        let r = cross_check(&sol, &x3.ode, &IntegratorConfig::over(0.0, 10.0)).unwrap();
        assert!(r.max_abs_err() < 1e-5);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["integrator_failed"], false);
        assert!(v["max_abs_err_x"].is_number());
    }
}
