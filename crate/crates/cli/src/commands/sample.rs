use std::path::Path;

use anyhow::Context;
use koopman_rational::family::{self, Family};
use koopman_rational::sample::sample_odes;

use crate::exit;
use crate::manifest::{InputDigest, RunManifest};

pub const SEED_ENV: &str = "KOOPMAN_RATIONAL_SEED";

/// The environment seed wins over `--seed`.
fn effective_seed(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            koopman_rational::Error::Parse(format!("{SEED_ENV}={text:?} is not an unsigned integer")).into()
        }),
        Err(_) => Ok(flag),
    }
}

pub fn run(family: Option<Family>, seed: u64, count: usize, out_dir: &Path) -> anyhow::Result<u8> {
    let seed = effective_seed(seed)?;
    if count == 0 {
        say!("no samples requested");
        return Ok(exit::OK);
    }
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let label = family.map_or_else(|| "generic".to_string(), |f| f.to_string());
    let mut outputs = Vec::with_capacity(count);
    for (i, ode) in sample_odes(family, seed, count).iter().enumerate() {
        if let Some(f) = family {
            let m = family::classify(ode)?;
            let member = match f {
                Family::L => m.in_l,
                Family::X => m.in_x,
            };
            if !member {
                return Err(koopman_rational::Error::InternalConsistency(format!("sample {i} is not in {f}")).into());
            }
        }
        let name = format!("ode_{i:04}.json");
        let path = out_dir.join(&name);
        std::fs::write(&path, ode.to_json_string() + "\n").with_context(|| format!("writing {}", path.display()))?;
        outputs.push(name);
    }
    let digest = InputDigest::default()
        .field("family", &label)
        .field("seed", seed.to_le_bytes())
        .field("count", (count as u64).to_le_bytes());
    let mut manifest = RunManifest::new("sample", digest, seed);
    manifest.outputs = outputs;
    manifest.write(&out_dir.join("manifest.json"))?;
    say!("wrote {count} {label} samples (seed {seed}) to {}", out_dir.display());
    Ok(exit::OK)
}
