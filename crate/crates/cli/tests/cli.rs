//! End-to-end tests of the binary: output contracts, exit codes, and
//! byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rotorad"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn cf_methods_agree() {
    let out = run(&[
        "cf",
        "--component",
        "E11",
        "--beta",
        "0.6",
        "--delta",
        "1.0",
        "--methods",
        "closed,quadrature",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "command,beta,gamma,delta,method,value,std_error,units,seed"
    );
    let vals: Vec<f64> = lines
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 2);
    assert!(
        ((vals[0] - vals[1]) / vals[0]).abs() < 1e-8,
        "closed {} vs quadrature {}",
        vals[0],
        vals[1]
    );
}

#[test]
fn energy_radius_sweep_monotone() {
    let out = run(&["energy", "--omega", "1.0", "--radius-sweep", "0.1:0.9:9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let vals: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 9);
    for w in vals.windows(2) {
        assert!(w[1] > w[0], "sweep must be strictly increasing");
    }
}

#[test]
fn validate_runs_and_is_byte_identical() {
    let dir = std::env::temp_dir().join(format!("rotorad-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("run_a.csv");
    let b = dir.join("run_b.csv");
    for path in [&a, &b] {
        let out = run(&["validate", "--seed", "42", "--out", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "validate failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "validate reports must be byte-identical");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // 1: usage
    let out = run(&["cf", "--methods", "sorcery"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // 2: physics constraint named in the message
    let out = run(&["cf", "--beta", "1.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("light cylinder"));
    // 3: numeric failure (zero-lag pole)
    let out = run(&[
        "cf",
        "--component",
        "E11",
        "--delta",
        "0.0",
        "--methods",
        "closed",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn partial_results_flushed_on_numeric_failure() {
    // second grid point hits the zero-lag pole; the first must still land
    let out = run(&[
        "cf",
        "--component",
        "E11",
        "--delta",
        "1.0,0.0",
        "--methods",
        "closed",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 3, "expected partial rows, got {text}");
    assert!(lines[1].contains("closed"));
    assert!(lines[2].contains("error["));
}

#[test]
fn json_roundtrip_bit_exact() {
    let out = run(&[
        "cf",
        "--component",
        "E11",
        "--beta",
        "0.37",
        "--delta",
        "0.9",
        "--methods",
        "closed",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &parsed.as_array().unwrap()[0];
    let value = row["value"].as_f64().unwrap();
    // recompute the same run as CSV and compare bitwise
    let csv = run(&[
        "cf",
        "--component",
        "E11",
        "--beta",
        "0.37",
        "--delta",
        "0.9",
        "--methods",
        "closed",
    ]);
    let text = stdout(&csv);
    let csv_value: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(5)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(value.to_bits(), csv_value.to_bits());
}

#[test]
fn config_file_seeds_flags_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("rotorad-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "beta=0.6\ndelta=1.0\nmethods=closed\ncomponent=E11\n").unwrap();
    let from_cfg = run(&["cf", "--config", cfg.to_str().unwrap()]);
    assert!(from_cfg.status.success());
    let v_cfg: f64 = stdout(&from_cfg)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(5)
        .unwrap()
        .parse()
        .unwrap();
    // flag overrides the config beta
    let overridden = run(&["cf", "--config", cfg.to_str().unwrap(), "--beta", "0.3"]);
    assert!(overridden.status.success());
    let v_flag: f64 = stdout(&overridden)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(5)
        .unwrap()
        .parse()
        .unwrap();
    assert_ne!(v_cfg.to_bits(), v_flag.to_bits());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_sweep_is_usage_error_and_writes_no_file() {
    let dir = std::env::temp_dir().join(format!("rotorad-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("never.csv");
    let out = run(&[
        "energy",
        "--radius-sweep",
        "0.1:0.9:0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&path).exists(), "no file on empty rows");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn discrete_command_total_and_thermal() {
    let out = run(&[
        "discrete",
        "--component",
        "E11",
        "--beta",
        "0.6",
        "--delta",
        "1.0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("discrete-sum[total]"));
    assert!(lines[2].contains("discrete-sum[thermal]"));
    let total: f64 = lines[1].split(',').nth(5).unwrap().parse().unwrap();
    assert!((total - 17.025_275_733).abs() < 1e-6);
}

#[test]
fn tetrad_command_reports_residuals() {
    let out = run(&["tetrad", "--beta", "0.9", "--delta", "0.0,1.0,2.0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 3 * 5);
    for line in &lines[1..] {
        let v: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(v < 1e-11, "tetrad residual too large: {line}");
    }
}

#[test]
fn si_energy_reports_kelvin_and_density() {
    let out = run(&[
        "energy",
        "--si",
        "--omega",
        "6.283185307179586",
        "--radius",
        "1.0e7",
        "--methods",
        "closed-form,t-rot",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let trot_line = text.lines().find(|l| l.contains("t-rot")).unwrap();
    let trot: f64 = trot_line.split(',').nth(5).unwrap().parse().unwrap();
    // Omega = 2π rad/s gives T_rot = ħ/k_B ≈ 7.64e-12 K
    assert!((trot - 7.6382e-12).abs() < 1e-15, "T_rot = {trot}");
    assert!(trot_line.contains(",K,"));
}
