use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use koopman_rational::family;
use koopman_rational::QuadraticODE;
use tempfile::TempDir;

const L_SYSTEM: &str = r#"{"a": [1, -2, 2, 1, 0], "b": [3, 1, 0, 2, 1]}"#;
const X_SYSTEM: &str = r#"{"a": [-4, -2, 1, 0, "-2/3"], "b": [3, 1, 0, 2, "5/3"]}"#;
const X2_SYSTEM: &str = r#"{"a": [-3, -2, 1, 0, "-2/3"], "b": [3, 1, 0, 2, "4/3"]}"#;
const X3_SYSTEM: &str = r#"{"a": [-1, 2, 1, 1, "-3/2"], "b": [-2, 1, "-1/2", 3, -1]}"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_koopman-rational"));
    cmd.env_remove("KOOPMAN_RATIONAL_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_family_flags_and_residuals() {
    let dir = TempDir::new().unwrap();
    let out = run(&["classify", s(&write(dir.path(), "l.json", L_SYSTEM))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("L: yes, X: no"), "{text}");
    assert_eq!(text.lines().count(), 1 + 2 + 13);

    let out = run(&["classify", s(&write(dir.path(), "x.json", X_SYSTEM))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("L: no, X: yes"));
}

#[test]
fn classify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let generic = write(dir.path(), "g.json", r#"{"a": [1, 2, 3, 4, 5], "b": [1, 1, 1, 1, 1]}"#);
    assert_eq!(run(&["classify", s(&generic)]).status.code(), Some(3));
    let broken = write(dir.path(), "bad.json", r#"{"a": [1, 2"#);
    let out = run(&["classify", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));
    let short = write(dir.path(), "short.json", r#"{"a": [1, 2], "b": [1, 1, 1, 1, 1]}"#);
    assert_eq!(run(&["classify", s(&short)]).status.code(), Some(2));
}

#[test]
fn classify_tolerance_mode_accepts_rounded_decimals() {
    let dir = TempDir::new().unwrap();
    let rounded = r#"{"a": [-4, -2, 1, 0, -0.6666666666667], "b": [3, 1, 0, 2, 1.6666666666667]}"#;
    let path = write(dir.path(), "r.json", rounded);
    assert_eq!(run(&["classify", s(&path)]).status.code(), Some(3));
    let out = run(&["classify", s(&path), "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("L: no, X: yes"));
}

#[test]
fn solve_reports_blowup_and_writes_outputs() {
    let dir = TempDir::new().unwrap();
    let ode = write(dir.path(), "l.json", L_SYSTEM);
    let csv = dir.path().join("traj.csv");
    let out = run(&["solve", s(&ode), "--x0", "0", "--y0", "1", "--t1", "3", "--samples", "31", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("lambda1: 1 - sqrt(-6)") && text.contains("lambda2: 2*sqrt(-6)"), "{text}");
    let line = text.lines().find(|l| l.starts_with("blow-up: t = ")).expect("blow-up line");
    let tb: f64 = line["blow-up: t = ".len()..].parse().unwrap();
    assert!((tb - 2.10895).abs() < 1e-4);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 32);
    assert!(dir.path().join("traj.pairs.json").exists());
    assert!(dir.path().join("traj.manifest.json").exists());
}

#[test]
fn solve_starts_exactly_at_initial_condition() {
    let dir = TempDir::new().unwrap();
    let ode = write(dir.path(), "x.json", X_SYSTEM);
    let csv = dir.path().join("x.csv");
    let out = run(&["solve", s(&ode), "--x0", "-3", "--y0", "-4", "--t1", "3", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').take(3).map(|v| v.parse().unwrap()).collect();
    assert_eq!(row, [0.0, -3.0, -4.0]);
}

#[test]
fn solve_errors_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", X_SYSTEM);
    let out = run(&["solve", s(&x), "--x0", "1", "--y0", "-1", "--out", s(&dir.path().join("p.csv"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("denominator vanishes at (1, -1)"));

    let degenerate = write(dir.path(), "d.json", r#"{"a": [1, 0, 1, 1, 0], "b": [1, 1, 0, 1, 1]}"#);
    let out = run(&["solve", s(&degenerate), "--x0", "1", "--y0", "1", "--out", s(&dir.path().join("d.csv"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("a4*b1 - b2*b4 vanishes"), "{}", stderr(&out));

    let generic = write(dir.path(), "g.json", r#"{"a": [1, 2, 3, 4, 5], "b": [1, 1, 1, 1, 1]}"#);
    let out = run(&["solve", s(&generic), "--x0", "1", "--y0", "1", "--out", s(&dir.path().join("g.csv"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_on_complex_spectra() {
    let dir = TempDir::new().unwrap();
    let x2 = write(dir.path(), "x2.json", X2_SYSTEM);
    let out = run(&["verify", s(&x2), "--x0", "2", "--y0", "-1", "--t1", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let x3 = write(dir.path(), "x3.json", X3_SYSTEM);
    let out = run(&["verify", s(&x3), "--x0", "2", "--y0", "-1", "--t1", "10", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_handles_constant_terms() {
    let dir = TempDir::new().unwrap();
    let boxed = write(dir.path(), "box.json", r#"{"a": [0, 0, 0, 1, 0], "b": [-1, 0, 0, 0, 1], "b0": -1}"#);
    let out = run(&["verify", s(&boxed), "--x0", "1/2", "--y0", "0.2", "--t1", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_replays_and_rejects_tampered_pairs() {
    let dir = TempDir::new().unwrap();
    let ode = write(dir.path(), "l.json", L_SYSTEM);
    let csv = dir.path().join("l.csv");
    assert_eq!(
        run(&["solve", s(&ode), "--x0", "0", "--y0", "1", "--t1", "2", "--out", s(&csv)]).status.code(),
        Some(0)
    );
    let pairs = dir.path().join("l.pairs.json");
    let out = run(&["verify", s(&ode), "--x0", "0", "--y0", "1", "--t1", "2", "--pairs", s(&pairs)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&pairs).unwrap()).unwrap();
    doc["pairs"][0]["lambda"]["rat"] = "2".into();
    let tampered = write(dir.path(), "tampered.json", &doc.to_string());
    let out = run(&["verify", s(&ode), "--x0", "0", "--y0", "1", "--t1", "2", "--pairs", s(&tampered)]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains("h residual 1         FAIL"));
}

fn sampled(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("ode_"))
        .collect();
    files.sort();
    files
}

#[test]
fn sample_writes_family_members() {
    let dir = TempDir::new().unwrap();
    for (fam, member) in [("X", 1), ("L", 0)] {
        let out_dir = dir.path().join(fam);
        let out = run(&["sample", "--family", fam, "--seed", "1", "--count", "5", "--out-dir", s(&out_dir)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let files = sampled(&out_dir);
        assert_eq!(files.len(), 5);
        for f in files {
            let ode = QuadraticODE::from_json_str(&std::fs::read_to_string(f).unwrap()).unwrap();
            let m = family::classify(&ode).unwrap();
            assert!([m.in_l, m.in_x][member]);
        }
        assert!(out_dir.join("manifest.json").exists());
    }
}

#[test]
fn sample_count_zero_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("none");
    let out = run(&["sample", "--family", "L", "--count", "0", "--out-dir", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out_dir.exists());
}

#[test]
fn seed_environment_variable_overrides_flag() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    run(&["sample", "--family", "X", "--seed", "7", "--count", "3", "--out-dir", s(&a)]);
    let out = bin()
        .args(["sample", "--family", "X", "--seed", "1", "--count", "3", "--out-dir", s(&b)])
        .env("KOOPMAN_RATIONAL_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    run(&["sample", "--family", "X", "--seed", "1", "--count", "3", "--out-dir", s(&c)]);
    let read = |d: &Path| sampled(d).iter().map(|p| std::fs::read(p).unwrap()).collect::<Vec<_>>();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(b.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
}

#[test]
fn identical_runs_write_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let ode = write(dir.path(), "x2.json", X2_SYSTEM);
    let outputs: Vec<Vec<Vec<u8>>> = ["one", "two"]
        .iter()
        .map(|tag| {
            let sub = dir.path().join(tag);
            std::fs::create_dir(&sub).unwrap();
            let csv = sub.join("traj.csv");
            let out =
                run(&["solve", s(&ode), "--x0", "2", "--y0", "-1", "--t1", "4", "--samples", "257", "--out", s(&csv)]);
            assert_eq!(out.status.code(), Some(0));
            ["traj.csv", "traj.pairs.json", "traj.manifest.json"]
                .iter()
                .map(|f| std::fs::read(sub.join(f)).unwrap())
                .collect()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn manifest_digest_tracks_inputs() {
    let dir = TempDir::new().unwrap();
    let ode = write(dir.path(), "x.json", X_SYSTEM);
    let digest = |x0: &str, name: &str| {
        let csv = dir.path().join(name);
        run(&["solve", s(&ode), "--x0", x0, "--y0", "-4", "--out", s(&csv)]);
        let m: serde_json::Value =
            serde_json::from_slice(&std::fs::read(csv.with_extension("manifest.json")).unwrap()).unwrap();
        m["input_digest"].as_str().unwrap().to_string()
    };
    assert_eq!(digest("-3", "a.csv"), digest("-3", "b.csv"));
    assert_ne!(digest("-3", "a.csv"), digest("-2", "c.csv"));
}

#[test]
fn examples_table_passes_and_perturbation_fails() {
    let out = run(&["examples"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("5/5 examples pass"));

    let out = run(&["examples", "--perturb", "1e-3"]);
    assert_eq!(out.status.code(), Some(5));
    let text = stdout(&out);
    assert!(text.contains("0/5 examples pass"));
    assert!(text.contains("failed: L example (classification)"));

    let out = run(&["examples", "--json"]);
    let results: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = results.as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.iter().all(|r| r["passed"] == true));
}

#[test]
fn bad_arguments_exit_with_parse_code() {
    assert_eq!(run(&["sample", "--family", "Q", "--out-dir", "unused"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "missing.json", "--x0", "1/0", "--y0", "1", "--out", "o.csv"]).status.code(), Some(2));
    let out = bin()
        .args(["sample", "--family", "L", "--count", "1", "--out-dir", "unused"])
        .env("KOOPMAN_RATIONAL_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
