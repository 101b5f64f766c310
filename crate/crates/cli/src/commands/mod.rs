pub mod classify;
pub mod examples;
pub mod sample;
pub mod solve;
pub mod verify;

use std::path::Path;

use anyhow::Context;
use koopman_rational::QuadraticODE;

/// Reads an ODE file, returning the system and the raw bytes for digests.
pub fn read_ode(path: &Path) -> anyhow::Result<(QuadraticODE, String)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ode = QuadraticODE::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((ode, text))
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}
