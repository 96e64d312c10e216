// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhfloquet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn hops_json(args: &[&str]) -> Value {
    let mut all = vec!["hops"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn first_relative(v: &Value) -> f64 {
    v["summary"]["first_relative"].as_f64().unwrap()
}

#[test]
fn critical_prints_ratio() {
    let s = stdout(&["critical"]);
    let c: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("c = "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((c - 0.439_228_839_890_645).abs() < 1e-12);
}

#[test]
fn hop_timings() {
    let v = hops_json(&["--model", "bu", "--rho", "0.5", "--period", "20"]);
    assert_eq!(v["summary"]["count"], 2);
    assert!((first_relative(&v) - 0.376).abs() < 0.01);
    let v = hops_json(&["--model", "bu", "--rho", "0.5", "--period", "250"]);
    assert!((first_relative(&v) - 0.302).abs() < 0.005);
    let v = hops_json(&[
        "--model",
        "bu",
        "--rho",
        "0.5",
        "--period",
        "250",
        "--initial",
        "mix(0.5,1)",
    ]);
    assert!((first_relative(&v) - 0.035).abs() < 0.005);
}

#[test]
fn hop_sweep_is_an_array() {
    let v = hops_json(&[
        "--model", "bu", "--rho", "0.5", "--t-min", "20", "--t-max", "40", "--t-step", "20",
    ]);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn dominance_switches_on_strong_pt_drive() {
    let v = hops_json(&[
        "--model",
        "h2",
        "--mu",
        "1.2",
        "--period",
        "100",
        "--dominance",
    ]);
    assert_eq!(v["summary"]["count"], 2);
    assert!(v["events"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["kind"] == "dominance_switch"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bu run\nmodel = bu\nrho = 0.5\nperiod = 250\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert!((first_relative(&hops_json(&["--config", c])) - 0.302).abs() < 0.005);
    assert!((first_relative(&hops_json(&["--config", c, "--period", "20"])) - 0.376).abs() < 0.01);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["hops", "--model", "h3"]).status.code(), Some(2));
    assert_eq!(bin(&["hops", "--model", "bu"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "model = bu\nspeed = 3\n").unwrap();
    assert_eq!(
        bin(&["hops", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let out = dir.path().join("missing").join("x.csv");
    let code = bin(&["critical", "--out", out.to_str().unwrap()])
        .status
        .code();
    assert_eq!(code, Some(4));
}

fn sweep(out: &Path, jobs: &str) -> Vec<u8> {
    let o = out.to_str().unwrap();
    let args = [
        "aa-sweep", "--model", "h1", "--t-min", "1", "--t-max", "12", "--t-step", "0.5", "--steps",
        "512",
    ];
    let mut all = args.to_vec();
    all.extend_from_slice(&["--jobs", jobs, "--out", o]);
    stdout(&all);
    std::fs::read(out).unwrap()
}

#[test]
fn aa_sweep_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = sweep(&dir.path().join("one.csv"), "1");
    let four = sweep(&dir.path().join("four.csv"), "4");
    assert_eq!(one, four);
    let text = String::from_utf8(one).unwrap();
    assert_eq!(text.lines().next(), Some("period,beta_plus,beta_minus"));
    assert_eq!(text.lines().count(), 24);
    assert!(!dir.path().join("one.csv.warnings").exists());
}

fn wedge_changes(rho: &str) -> usize {
    let s = stdout(&[
        "stokes",
        "--model",
        "bu",
        "--rho",
        rho,
        "--period",
        "50",
        "--samples",
        "720",
    ]);
    let signs: Vec<String> = s
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .filter(|w| w != "0")
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[test]
fn stokes_wedges() {
    assert_eq!(wedge_changes("0.55"), 2);
    assert_eq!(wedge_changes("0.35"), 0);
}

#[test]
fn tables_have_headers() {
    let s = stdout(&["bessel-check"]);
    assert!(s.starts_with("nu,re_x,im_x,"));
    assert_eq!(s.lines().count(), 8);
    let s = stdout(&["bloch", "--model", "h1", "--period", "5", "--steps", "64"]);
    assert!(s.starts_with("t,theta_state,phi_state,"));
    assert_eq!(s.lines().count(), 66);
    let s = stdout(&[
        "trajectory",
        "--model",
        "bu",
        "--rho",
        "0.3",
        "--period",
        "50",
        "--steps",
        "256",
    ]);
    assert_eq!(s.lines().next().unwrap().split(',').count(), 13);
}
