use std::path::Path;

use koopman_rational::exact::rational;
use koopman_rational::family::{self, L_POLYNOMIALS, X_POLYNOMIALS};

use super::{read_ode, yes_no};
use crate::exit;

pub fn run(path: &Path, tol: Option<f64>) -> anyhow::Result<u8> {
    let (ode, _) = read_ode(path)?;
    let target = if ode.is_normal_form() {
        ode
    } else {
        let nf = family::to_normal_form(&ode)?;
        let (su, sv) = &nf.shift;
        say!("shift: x = u + {}, y = v + {}", rational::format(su), rational::format(sv));
        if !nf.constants_vanish {
            say!("constant terms survive the shift; no normal form");
            say!("L: no, X: no");
            return Ok(exit::NOT_IN_FAMILY);
        }
        nf.ode
    };
    let m = family::classify(&target)?;
    let (in_l, in_x) = match tol {
        Some(t) => m.within(t),
        None => (m.in_l, m.in_x),
    };
    say!("L: {}, X: {}", yes_no(in_l), yes_no(in_x));
    if let Some(t) = tol {
        say!("tolerance: |residual| < {t:e}");
    }
    say!("L residuals:");
    for (name, r) in L_POLYNOMIALS.iter().zip(&m.l_residuals) {
        say!("  {name:<32} {}", rational::format(r));
    }
    say!("X residuals:");
    for (name, r) in X_POLYNOMIALS.iter().zip(&m.x_residuals) {
        say!("  {name:<32} {}", rational::format(r));
    }
    Ok(if in_l || in_x { exit::OK } else { exit::NOT_IN_FAMILY })
}
