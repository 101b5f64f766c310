use koopman_rational::catalog::{self, Example};
use koopman_rational::eigensolver::{ode_from_eigenpairs, verify_eigenpair};
use koopman_rational::exact::rational::{self, int};
use koopman_rational::family;
use koopman_rational::solution::{build_solution, time_grid};
use koopman_rational::{ClosedFormSolution, Eigenpair, ExactRational, QuadExt, QuadraticODE};
use serde::Serialize;

use crate::exit;

const BLOWUP_TOL: f64 = 1e-4;
const BLOWUP_SCAN_END: f64 = 3.0;
const TRAJECTORY_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct Check {
    check: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct ExampleResult {
    example: &'static str,
    passed: bool,
    checks: Vec<Check>,
}

impl ExampleResult {
    fn push(&mut self, check: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { check, passed, detail: detail.into() });
    }
}

/// Adds `eps·i` to `a_i` and `−eps·(i + 1)` to `b_i` for `i = 1..5`.
fn perturb(ode: &QuadraticODE, eps: &ExactRational) -> QuadraticODE {
    let a = std::array::from_fn(|i| ode.a(i + 1) + eps * int(i as i64 + 1));
    let b = std::array::from_fn(|i| ode.b(i + 1) - eps * int(i as i64 + 2));
    QuadraticODE::with_constants(ode.a(0).clone(), a, ode.b(0).clone(), b)
}

fn classification(ex: &Example, ode: &QuadraticODE) -> (bool, String) {
    let nf = match family::to_normal_form(ode) {
        Ok(nf) if nf.constants_vanish => nf,
        Ok(_) => return (false, "constant terms survive the normal-form shift".into()),
        Err(e) => return (false, e.to_string()),
    };
    let m = match family::classify(&nf.ode) {
        Ok(m) => m,
        Err(e) => return (false, e.to_string()),
    };
    let found = format!("L: {}, X: {}", super::yes_no(m.in_l), super::yes_no(m.in_x));
    let ok = match ex.printed.family {
        Some(family::Family::L) => m.in_l,
        Some(family::Family::X) => m.in_x,
        None => m.in_any(),
    };
    (ok, found)
}

/// Index of the computed pair carrying each printed eigenvalue.
fn match_pairs(printed: &[Eigenpair<QuadExt>; 2], computed: &[&Eigenpair<QuadExt>; 2]) -> Option<[usize; 2]> {
    let find = |p: &Eigenpair<QuadExt>| computed.iter().position(|c| c.lambda == p.lambda);
    match (find(&printed[0]), find(&printed[1])) {
        (Some(i), Some(j)) if i != j => Some([i, j]),
        _ => None,
    }
}

fn list(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(", ")
}

fn family_checks(ex: &Example, sol: &ClosedFormSolution, r: &mut ExampleResult) {
    let computed = [&sol.pair1, &sol.pair2];
    let phi0 = [&sol.phi1_0, &sol.phi2_0];
    let Some(idx) = match_pairs(&ex.printed.pairs, &computed) else {
        r.push("eigenvalues", false, format!("computed {}", list(computed.iter().map(|p| p.lambda.to_string()))));
        return;
    };
    r.push("eigenvalues", true, list(ex.printed.pairs.iter().map(|p| p.lambda.to_string())));
    let efs_ok = idx.iter().zip(&ex.printed.pairs).all(|(&i, p)| computed[i].ef.projectively_equal(&p.ef));
    r.push("eigenfunctions", efs_ok, if efs_ok { "projectively equal" } else { "coefficient vectors differ" });
    let phi_ok = idx.iter().zip(&ex.printed.phi0).all(|(&i, v)| phi0[i] == v);
    r.push("ic images", phi_ok, list(idx.iter().map(|&i| phi0[i].to_string())));
}

fn printed_pair_checks(ex: &Example, ode: &QuadraticODE, r: &mut ExampleResult) {
    let [p1, p2] = &ex.printed.pairs;
    let residual_ok = verify_eigenpair(ode, p1).is_zero() && verify_eigenpair(ode, p2).is_zero();
    r.push("eigenpairs", residual_ok, if residual_ok { "exact residual zero" } else { "nonzero residual" });
    let rebuilt = ode_from_eigenpairs(p1, p2);
    let rebuilt_ok = rebuilt.as_ref().is_ok_and(|o| o == ode);
    let detail = match rebuilt {
        Ok(_) if rebuilt_ok => "reconstructs the system".to_string(),
        Ok(_) => "reconstructs a different system".to_string(),
        Err(e) => e.to_string(),
    };
    r.push("reconstruction", rebuilt_ok, detail);
    let (x0, y0) = (QuadExt::rational(ex.ic.x0.clone()), QuadExt::rational(ex.ic.y0.clone()));
    let images: Vec<_> = ex.printed.pairs.iter().map(|p| p.ef.eval(&x0, &y0)).collect();
    let phi_ok = images.iter().zip(&ex.printed.phi0).all(|(v, p)| v.as_ref().is_ok_and(|v| v == p));
    r.push("ic images", phi_ok, list(images.iter().map(|v| v.as_ref().map_or("pole".into(), |v| v.to_string()))));
}

fn trajectory_check(ex: &Example, sol: &ClosedFormSolution, r: &mut ExampleResult) {
    let t1 = ex.printed.blowup.map_or(5.0, |tb| tb - 0.2);
    let worst = time_grid(0.0, t1, 201)
        .into_iter()
        .map(|t| {
            let s = sol.sample(t);
            let (x, y) = (ex.closed_form)(&ex.ic, t);
            ((s.x - x).abs() / x.abs().max(1.0)).max((s.y - y).abs() / y.abs().max(1.0))
        })
        .fold(0.0, f64::max);
    r.push("trajectory", worst < TRAJECTORY_TOL, format!("max scaled error {worst:.2e} on [0, {t1:.4}]"));
}

fn run_example(ex: &Example, eps: Option<&ExactRational>) -> ExampleResult {
    let ode = eps.map_or_else(|| ex.ode.clone(), |e| perturb(&ex.ode, e));
    let mut r = ExampleResult { example: ex.name, passed: false, checks: Vec::new() };
    let (ok, detail) = classification(ex, &ode);
    r.push("classification", ok, detail);
    if ok {
        match build_solution(&ode, &ex.ic) {
            Err(e) => r.push("solve", false, e.to_string()),
            Ok(sol) => {
                if ex.printed.family.is_some() {
                    family_checks(ex, &sol, &mut r);
                } else {
                    printed_pair_checks(ex, &ode, &mut r);
                }
                if let Some(expected) = ex.printed.blowup {
                    let (ok, detail) = match sol.blowup_time(BLOWUP_SCAN_END) {
                        Ok(Some(t)) => ((t - expected).abs() < BLOWUP_TOL, format!("t = {t:.6}, printed {expected}")),
                        Ok(None) => (false, format!("none found, printed {expected}")),
                        Err(e) => (false, e.to_string()),
                    };
                    r.push("blow-up", ok, detail);
                }
                trajectory_check(ex, &sol, &mut r);
            }
        }
    }
    r.passed = r.checks.iter().all(|c| c.passed);
    r
}

pub fn run(perturb: Option<&ExactRational>, json: bool) -> anyhow::Result<u8> {
    let results: Vec<_> = catalog::all_examples().iter().map(|ex| run_example(ex, perturb)).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    if json {
        say!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        if let Some(eps) = perturb {
            say!("coefficient perturbation: {}", rational::format(eps));
        }
        say!("{:<14} {:<16} {:<6} detail", "example", "check", "status");
        for r in &results {
            for c in &r.checks {
                say!("{:<14} {:<16} {:<6} {}", r.example, c.check, if c.passed { "pass" } else { "FAIL" }, c.detail);
            }
        }
        say!("{passed}/{} examples pass", results.len());
        for r in results.iter().filter(|r| !r.passed) {
            let failing: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.check).collect();
            say!("failed: {} ({})", r.example, failing.join(", "));
        }
    }
    Ok(if passed == results.len() { exit::OK } else { exit::VERIFICATION })
}
