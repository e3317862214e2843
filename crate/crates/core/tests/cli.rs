use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mgmimo"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("cfg.toml");
    fs::write(&path, text).unwrap();
    path
}

fn validate(path: &Path) -> Output {
    bin().arg("validate").arg("--config").arg(path).output().unwrap()
}

fn run(path: &Path, out: &Path, extra: &[&str]) -> Output {
    let output = bin()
        .arg("run")
        .arg("--config")
        .arg(path)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    output
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn shipped_configs_validate() {
    for entry in fs::read_dir(config("")).unwrap() {
        let path = entry.unwrap().path();
        let out = validate(&path);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    }
}

#[test]
fn empty_snr_grid_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        r#"
scenario = "ber_sweep"
[geometry]
layout = "coaxial"
rx_aperture = 0.6
distance = 5
frequency_hz = 10.2e9
[[systems]]
kind = "mg_mimo"
groups = ["2,3", "-3,-2"]
[link]
modulation = "qpsk"
snr_db = []
"#,
    );
    let out = validate(&path);
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("link.snr_db"), "{text}");
}

#[test]
fn pasr_without_vorticity_difference_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        r#"
scenario = "pasr"
[pasr]
groups = ["1..4", "1..4"]
distance = 2
"#,
    );
    let out = validate(&path);
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASR undefined"), "{text}");
}

#[test]
fn invalid_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "scenario = \"pasr\"\n[pasr]\ngroups = [\"1..4\", \"1..4\"]\n");
    let out_dir = dir.path().join("out");
    let out = bin()
        .arg("run")
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!out_dir.join("manifest.json").exists());
}

#[test]
fn pattern_run_reports_boresight_gain() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("pattern.toml"), dir.path(), &[]);
    let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let row = csv
        .lines()
        .find(|l| l.starts_with("MG{1..4},0.0,"))
        .expect("boresight row");
    let gain: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((gain - 20.0 * 2f64.log10()).abs() < 1e-9, "{gain}");
    assert_eq!(manifest(dir.path())["scenario"], "pattern");
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = config("vorticity.toml");
    run(&cfg, a.path(), &["--seed", "5", "--threads", "2"]);
    run(&cfg, b.path(), &["--seed", "5", "--threads", "1"]);
    let (ma, mb) = (manifest(a.path()), manifest(b.path()));
    assert_eq!(ma["outputs"], mb["outputs"]);
    assert_eq!(ma["seed"], 5);
    assert_eq!(
        fs::read(a.path().join("results.csv")).unwrap(),
        fs::read(b.path().join("results.csv")).unwrap()
    );
}

#[test]
fn capacity_run_peaks_near_expected_gain() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("capacity.toml"), dir.path(), &[]);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let peak: f64 = summary
        .lines()
        .find(|l| l.starts_with("MG{1..10}"))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((peak - 2.6).abs() < 0.15, "{peak}");
    let m = manifest(dir.path());
    let files: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|o| o["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["results.csv", "summary.csv"]);
}
