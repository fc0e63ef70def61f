//! Command-line behavior: exit codes, diagnostics, and output determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semnoma"))
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

#[test]
fn missing_logistic_entry_is_a_config_error_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[semantic]\nk = 6\n").unwrap();
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "--out"])
        .arg(dir.path().join("out"))
        .arg("region")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("semantic.logistic"), "stderr: {stderr}");
    assert!(stderr.contains("k = 6"), "stderr: {stderr}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[system]\np_n_wat = 1.0\n").unwrap();
    let out = bin()
        .args(["--config", cfg.to_str().unwrap()])
        .arg("region")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("p_n_wat"), "stderr: {stderr}");
}

#[test]
fn infeasible_target_exits_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("infeasible.toml");
    fs::write(&cfg, "[scenario2]\nr_bar = 50.0\n").unwrap();
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "--states", "64", "--out"])
        .arg(dir.path().join("out"))
        .args(["solve", "--scenario", "s2"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("infeasible"), "stderr: {stderr}");
}

#[test]
fn unknown_figure_id_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--out")
        .arg(dir.path())
        .args(["figure", "fig99"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown figure id"));
}

#[test]
fn zero_target_solve_reports_zero_multiplier() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("zero.toml");
    fs::write(&cfg, "[scenario1]\nr_bar = 0.0\n").unwrap();
    let status = bin()
        .args(["--config", cfg.to_str().unwrap(), "--states", "64", "--out"])
        .arg(dir.path())
        .args(["solve", "--scenario", "s1"])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = String::from_utf8(read(&dir.path().join("solve_s1_summary.csv"))).unwrap();
    let value_row = summary.lines().nth(1).unwrap();
    assert!(value_row.starts_with("0.00000000000e0,"), "summary: {value_row}");
}

#[test]
fn identical_seed_and_config_give_byte_identical_solve_outputs() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let status = bin()
            .args(["--states", "80", "--seed", "9", "--out"])
            .arg(dir.path())
            .args(["solve", "--scenario", "s1"])
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["solve_s1_states.csv", "solve_s1_summary.csv"] {
        assert_eq!(
            read(&dir_a.path().join(name)),
            read(&dir_b.path().join(name)),
            "{name} differs between runs"
        );
    }
}

#[test]
fn env_var_overrides_mirror_the_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SEMNOMA_OUT", dir.path())
        .env("SEMNOMA_STATES", "50")
        .env("SEMNOMA_SEED", "3")
        .args(["solve", "--scenario", "s1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let states = String::from_utf8(read(&dir.path().join("solve_s1_states.csv"))).unwrap();
    assert_eq!(states.lines().count(), 51, "50 states plus the header");
}

#[test]
fn oracle_check_command_passes_at_desk_scale() {
    let out = bin()
        .args(["oracle-check", "--scenario", "s1", "--instances", "2", "--instance-states", "24"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("oracle check passed"));
}
