use std::path::PathBuf;

use anyhow::Context;
use koopman_rational::eigensolver::verify_eigenpair;
use koopman_rational::integrate::IntegratorConfig;
use koopman_rational::poly::omega_expand;
use koopman_rational::solution::{build_solution, from_pairs};
use koopman_rational::verify::{cross_check, linearity_check, CrossCheckReport};
use koopman_rational::{ClosedFormSolution, Eigenpair, ExactRational, InitialCondition, QuadExt, QuadraticODE};
use serde::{Deserialize, Serialize};

use super::read_ode;
use crate::exit;

pub struct Args {
    pub ode: PathBuf,
    pub x0: ExactRational,
    pub y0: ExactRational,
    pub t1: f64,
    pub pairs: Option<PathBuf>,
    pub tol: f64,
    pub json: bool,
}

#[derive(Deserialize)]
struct Replay {
    pairs: [Eigenpair<QuadExt>; 2],
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Report {
    checks: Vec<Check>,
    cross_check: Option<CrossCheckReport>,
    passed: bool,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn print(&self) {
        for c in &self.checks {
            say!("{:<20} {:<4} {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        say!("result: {}", if self.passed { "pass" } else { "FAIL" });
    }
}

fn exact_checks(ode: &QuadraticODE, pairs: &[&Eigenpair<QuadExt>; 2], report: &mut Report) {
    for (i, p) in pairs.iter().enumerate() {
        let h = verify_eigenpair(ode, p);
        let detail = if h.is_zero() { "exact zero".to_string() } else { format!("max |entry| = {:.3e}", h.max_abs()) };
        report.push(format!("h residual {}", i + 1), h.is_zero(), detail);
    }
    for (i, p) in pairs.iter().enumerate() {
        let omega = omega_expand(ode, &p.ef, &p.lambda);
        let detail =
            if omega.is_zero() { "zero polynomial".to_string() } else { format!("{} nonzero terms", omega.len()) };
        report.push(format!("omega {}", i + 1), omega.is_zero(), detail);
    }
}

/// Largest `|φ(0)e^{λt}|` over the window, at least 1.
fn linearity_scale(sol: &ClosedFormSolution, index: usize, t1: f64) -> f64 {
    let pair = &sol.pairs_complex()[index];
    let phi0 = sol.phi0()[index].norm();
    (phi0 * (pair.lambda.re.max(0.0) * t1).exp()).max(1.0)
}

fn numeric_checks(
    sol: &ClosedFormSolution,
    ode: &QuadraticODE,
    args: &Args,
    report: &mut Report,
) -> koopman_rational::Result<()> {
    let cc = cross_check(sol, ode, &IntegratorConfig::over(0.0, args.t1))?;
    let (_, w1) = cc.window;
    let ok = !cc.integrator_failed && cc.max_abs_err() < args.tol;
    report.push(
        "cross-check",
        ok,
        format!("max |dx| = {:.3e}, max |dy| = {:.3e} on [0, {w1:.6}]", cc.max_abs_err_x, cc.max_abs_err_y),
    );
    let cfg = IntegratorConfig::over(0.0, w1);
    for (i, p) in [&sol.pair1, &sol.pair2].into_iter().enumerate() {
        let name = format!("linearity {}", i + 1);
        match linearity_check(ode, p, &sol.ic, &cfg) {
            Ok(r) => {
                let scaled = r / linearity_scale(sol, i, w1);
                report.push(name, scaled < args.tol, format!("max residual {r:.3e} (scaled {scaled:.3e})"));
            }
            Err(e) => report.push(name, false, e.to_string()),
        }
    }
    report.cross_check = Some(cc);
    Ok(())
}

pub fn run(args: &Args) -> anyhow::Result<u8> {
    let (ode, _) = read_ode(&args.ode)?;
    let ic = InitialCondition::new(args.x0.clone(), args.y0.clone());
    let mut report = Report { checks: Vec::new(), cross_check: None, passed: false };

    let sol = match &args.pairs {
        None => {
            let sol = build_solution(&ode, &ic)?;
            exact_checks(&ode, &[&sol.pair1, &sol.pair2], &mut report);
            Some(sol)
        }
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let replay: Replay = serde_json::from_str(&text)
                .map_err(|e| koopman_rational::Error::Parse(format!("{}: {e}", path.display())))?;
            let [p1, p2] = replay.pairs;
            exact_checks(&ode, &[&p1, &p2], &mut report);
            match from_pairs(p1, p2, &ic) {
                Ok(sol) => Some(sol),
                Err(e) => {
                    report.push("replayed pairs", false, e.to_string());
                    None
                }
            }
        }
    };

    let exact_ok = report.checks.iter().all(|c| c.passed);
    match sol {
        Some(sol) if exact_ok => {
            if let Err(e) = numeric_checks(&sol, &ode, args, &mut report) {
                report.push("numerical checks", false, e.to_string());
            }
        }
        _ => report.push("numerical checks", false, "skipped after exact failure"),
    }
    report.passed = report.checks.iter().all(|c| c.passed);

    if args.json {
        say!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        report.print();
    }
    Ok(if report.passed { exit::OK } else { exit::VERIFICATION })
}
