use std::path::Path;
use std::process::Command;

fn sanloc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sanloc"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("cfg.toml");
    std::fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = "[sweep]\nsnr_db = [0.0]\nseeds = [1]\n";

#[test]
fn run_writes_results_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let status = sanloc()
        .args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let rows = sanloc::experiment::read_csv(std::fs::File::open(out.join("results.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("config_sha256 = "));
    assert!(manifest.contains("fake_aod_sign = -1"));
}

#[test]
fn seeds_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let status = sanloc()
        .args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seeds", "0..3"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let rows = sanloc::experiment::read_csv(std::fs::File::open(out.join("results.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 18);
}

#[test]
fn fig2d_runs_with_scale() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let status = sanloc()
        .args(["fig2d", cfg.to_str().unwrap(), "--scale", "3", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("key_scale = 3"));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "[sweep]\nsnr_db = []\n");
    let out = sanloc().args(["run", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.snr_db"));

    let missing = sanloc().args(["run", "/nonexistent/cfg.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));

    let cfg = write_config(dir.path(), SMALL);
    let scale = sanloc().args(["fig2d", cfg.to_str().unwrap(), "--scale", "-1"]).output().unwrap();
    assert_eq!(scale.status.code(), Some(1));

    let seeds = sanloc().args(["run", cfg.to_str().unwrap(), "--seeds", "a"]).output().unwrap();
    assert_eq!(seeds.status.code(), Some(1));

    let usage = sanloc().arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn validate_exits_0_and_prints_tolerances() {
    let out = sanloc().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for tol in ["tolerance 1.0e-6", "tolerance 1.0e-10", "tolerance 1.0e-12", "tolerance 2.0e-2"] {
        assert!(text.contains(tol), "{tol} missing from:\n{text}");
    }
    assert!(text.contains("all checks passed"));
}
