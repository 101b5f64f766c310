use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;
use koopman_rational::exact::rational;
use koopman_rational::solution::{self, build_solution};
use koopman_rational::{Eigenpair, Error, ExactRational, InitialCondition, QuadExt};
use serde::Serialize;

use super::read_ode;
use crate::exit;
use crate::manifest::{InputDigest, RunManifest};

pub struct Args {
    pub ode: PathBuf,
    pub x0: ExactRational,
    pub y0: ExactRational,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub out: PathBuf,
}

/// Contents of `<out>.pairs.json`; `verify --pairs` reads it back.
#[derive(Serialize)]
struct PairsFile<'a> {
    family: Option<String>,
    delta: Option<&'a QuadExt>,
    pairs: [&'a Eigenpair<QuadExt>; 2],
    phi0: [&'a QuadExt; 2],
    ic: &'a InitialCondition,
    blowup_time: Option<f64>,
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn run(args: &Args) -> anyhow::Result<u8> {
    if !(args.t0.is_finite() && args.t1.is_finite()) {
        return Err(Error::InvalidConfig("t0 and t1 must be finite".into()).into());
    }
    let (ode, text) = read_ode(&args.ode)?;
    let ic = InitialCondition::new(args.x0.clone(), args.y0.clone());
    let sol = build_solution(&ode, &ic)?;

    if let Some(s) = &sol.spectrum {
        say!("family: {}", s.family);
        say!("delta: {}", s.delta);
    }
    say!("lambda1: {}", sol.pair1.lambda);
    say!("lambda2: {}", sol.pair2.lambda);

    let blowup = if args.t1 > 0.0 { sol.blowup_time(args.t1)? } else { None };
    match blowup {
        Some(t) => say!("blow-up: t = {t:.8}"),
        None => say!("blow-up: none in (0, {}]", args.t1.max(0.0)),
    }

    let times = solution::time_grid(args.t0, args.t1, args.samples);
    let samples = sol.evaluate_trajectory(&times);
    let csv = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    solution::write_csv(&samples, BufWriter::new(csv))?;

    let pairs_path = sibling(&args.out, "pairs.json");
    let pairs = PairsFile {
        family: sol.spectrum.as_ref().map(|s| s.family.to_string()),
        delta: sol.spectrum.as_ref().map(|s| &s.delta),
        pairs: [&sol.pair1, &sol.pair2],
        phi0: [&sol.phi1_0, &sol.phi2_0],
        ic: &sol.ic,
        blowup_time: blowup,
    };
    std::fs::write(&pairs_path, serde_json::to_string_pretty(&pairs)? + "\n")
        .with_context(|| format!("writing {}", pairs_path.display()))?;

    let digest = InputDigest::default()
        .field("ode", &text)
        .field("x0", rational::format(&args.x0))
        .field("y0", rational::format(&args.y0))
        .field("t0", args.t0.to_bits().to_le_bytes())
        .field("t1", args.t1.to_bits().to_le_bytes())
        .field("samples", (args.samples as u64).to_le_bytes());
    let manifest_path = sibling(&args.out, "manifest.json");
    let mut manifest = RunManifest::new("solve", digest, 0);
    manifest.outputs = vec![file_name(&args.out), file_name(&pairs_path)];
    manifest.write(&manifest_path)?;

    say!("wrote {} samples to {}", samples.len(), args.out.display());
    Ok(exit::OK)
}
