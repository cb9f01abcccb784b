//! End-to-end smoke tests of every subcommand, exit-code conventions, and
//! the byte-determinism guarantee of CSV outputs.

use std::fs;
use std::path::Path;
use std::process::Command;

fn elab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elab"))
}

fn run_ok(args: &[&str]) {
    let out = elab().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "elab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn dispersion_smoke() {
    let out = elab()
        .args(["dispersion", "--a", "1", "--modes", "1,2,3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("j,omega,b,c\n"));
    // Omega_1(1) = sqrt2 printed with 17 significant digits
    assert!(text.contains("1.4142135623730951e0"));
}

#[test]
fn simulate_smoke_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    for out in [&out1, &out2] {
        run_ok(&[
            "simulate",
            "--a",
            "1",
            "--eps",
            "0.05",
            "--amps",
            "0.05",
            "--grid",
            "64",
            "--dt",
            "1e-2",
            "--t-end",
            "0.5",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    for name in ["trajectory.csv", "diagnostics.csv"] {
        let a = fs::read(out1.join(name)).unwrap();
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} not byte-identical across identical runs");
        assert!(!a.is_empty());
    }
}

#[test]
fn solve_then_validate_smoke() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "solve-wave",
        "--a",
        "1",
        "--eps",
        "1e-4",
        "--splus",
        "1",
        "--cutoff",
        "5",
        "--tol",
        "1e-10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let solution = dir.path().join("solution.json");
    assert!(solution.exists());
    let text = fs::read_to_string(&solution).unwrap();
    assert!(text.contains("\"L\": 5"));
    run_ok(&[
        "validate-wave",
        "--solution",
        solution.to_str().unwrap(),
        "--t-check",
        "0.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let report = fs::read_to_string(dir.path().join("validation.json")).unwrap();
    assert!(report.contains("sim_error"));
}

#[test]
fn scan_cantor_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.cfg");
    fs::write(
        &cfg,
        "model.splus = 1\nmodel.sminus = 2\nscan.gamma = 1e-3\nscan.tau = 2\n\
         scan.ellmax = 10\nscan.a_min = 0.8\nscan.a_max = 1.2\nscan.grid_per_unit = 2000\n",
    )
    .unwrap();
    run_ok(&[
        "scan-cantor",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let scan: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("scan.json")).unwrap()).unwrap();
    assert!(scan["excluded_fraction"].as_f64().unwrap() < 1.0);
    assert!(scan["intervals"].is_array());
}

#[test]
fn audit_divisors_smoke() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "audit-divisors",
        "--a",
        "1",
        "--splus",
        "1",
        "--sminus",
        "2",
        "--gamma",
        "1e-6",
        "--tau",
        "3",
        "--ellmax",
        "3",
        "--jmax",
        "6",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(dir.path().join("audits.csv")).unwrap();
    assert!(csv.starts_with("kind,ell,j,jprime,value,bound,pass\n"));
    assert!(csv.contains("dioph"));
    assert!(csv.contains("transport"));
    assert!(csv.contains("melnikov1"));
    assert!(csv.contains("melnikov2_diag"));
    assert!(csv.contains("melnikov2_cross"));
}

#[test]
fn spectrum_smoke() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "spectrum",
        "--a",
        "1",
        "--splus",
        "1",
        "--lphi",
        "4",
        "--lx",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv.starts_with("re,im,j,kappa,matched\n"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn verify_ep_smoke() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "verify-ep",
        "--a",
        "1",
        "--eps",
        "0.05",
        "--amps",
        "0.05",
        "--grid",
        "128",
        "--t-end",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_ep.json")).unwrap())
            .unwrap();
    assert!(report["pass"].as_bool().unwrap());
    assert!(report["sup_mismatch"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn exit_codes() {
    // usage error -> 1
    let out = elab().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = elab().args(["dispersion", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // validation failure -> 2
    let out = elab()
        .args(["dispersion", "--a", "-1", "--modes", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unknown config key -> 2
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "model.unknown_key = 3\n").unwrap();
    let out = elab()
        .args(["dispersion", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // numerical failure (planted blow-up) -> 3
    let out = elab()
        .args([
            "simulate", "--a", "1", "--eps", "0.9", "--amps", "40", "--grid", "64", "--dt",
            "5e-2", "--t-end", "50",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_flag_precedence_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "model.a = 2.0\ndispersion.modes = 1\n").unwrap();
    // flag --a overrides the config value
    let out = elab()
        .args(["dispersion", "--config", cfg.to_str().unwrap(), "--a", "1.0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.4142135623730951e0")); // Omega_1(1), not Omega_1(2)
}

#[test]
fn solution_file_is_loadable_by_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "solve-wave",
        "--a",
        "1",
        "--eps",
        "1e-4",
        "--splus",
        "1",
        "--cutoff",
        "4",
        "--tol",
        "1e-10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let solution = dir.path().join("solution.json");
    run_ok(&[
        "spectrum",
        "--solution",
        solution.to_str().unwrap(),
        "--lphi",
        "4",
        "--lx",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(Path::new(&dir.path().join("spectrum.csv")).exists());
}
