//! End-to-end tests of the `zrp` binary: output schemas, exit codes,
//! determinism, and manifest checksums.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn zrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zrp"))
        .args(args)
        .output()
        .expect("failed to launch zrp")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("zrp-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn constants_integer_alpha() {
    let v = stdout_json(&zrp(&["constants", "--alpha", "4"]));
    let gamma = 1.0 + std::f64::consts::PI.powi(4) / 90.0;
    assert!((v["i_alpha"].as_f64().unwrap() - 1.0 / 630.0).abs() < 1e-14);
    assert!((v["gamma_alpha"].as_f64().unwrap() - gamma).abs() < 1e-10);
    let hop = v["hop_rate"].as_f64().unwrap();
    assert!((hop - 630.0 / gamma).abs() < 1e-7);
}

#[test]
fn constants_alpha_one_has_no_gamma() {
    let out = zrp(&["constants", "--alpha", "1"]);
    let v = stdout_json(&out);
    assert!(v["gamma_alpha"].is_null());
    assert!(v["hop_rate"].is_null());
    assert!((v["i_alpha"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-14);
    assert!(v["note"].is_string());
}

#[test]
fn capacity_schema_and_dense_oracle() {
    let v = stdout_json(&zrp(&[
        "capacity",
        "--L", "3",
        "--N", "10",
        "--alpha", "2",
        "--ellN", "2",
        "--A", "0",
        "--dense-oracle",
    ]));
    let cap = v["report"]["cap"].as_f64().unwrap();
    assert!(cap > 0.0);
    assert!(v["report"]["sandwich_ok"].as_bool().unwrap());
    assert!(v["oracle"]["rel_error"].as_f64().unwrap() <= 1e-9);
    let scaled = v["scaled_cap"].as_f64().unwrap();
    assert!((scaled - cap * 1000.0).abs() < 1e-9 * scaled);
    assert!(v["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn capacity_is_rotation_invariant() {
    let run = |site: &str| {
        let v = stdout_json(&zrp(&[
            "capacity",
            "--L", "3",
            "--N", "8",
            "--alpha", "2",
            "--ellN", "1",
            "--A", site,
        ]));
        v["report"]["cap"].as_f64().unwrap()
    };
    let c0 = run("0");
    let c1 = run("1");
    assert!((c0 - c1).abs() <= 1e-10 * c0);
}

#[test]
fn sweep_csv_header_and_constant_prediction() {
    let out = zrp(&[
        "sweep",
        "--L", "3",
        "--alpha", "4",
        "--N-list", "8,12,16",
        "--ellN-rule", "sqrt",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,ellN,scaled_cap,scaled_cap_sym,prediction,ratio,ratio_sym,discrete_ialpha,status"
    );
    let mut predictions = Vec::new();
    for line in lines.clone().take(3) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[8], "ok", "row: {line}");
        predictions.push(cols[4].parse::<f64>().unwrap());
    }
    assert!(predictions.windows(2).all(|w| w[0] == w[1]));
    let last = text.lines().filter(|l| !l.is_empty()).last().unwrap();
    assert!(last.starts_with("# summary:"), "last line: {last}");
}

#[test]
fn domain_errors_exit_2() {
    // A equal to the full site set is not a proper subset
    let out = zrp(&[
        "capacity", "--L", "3", "--N", "8", "--alpha", "2", "--A", "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // well width too large for the particle count
    let out = zrp(&[
        "capacity", "--L", "3", "--N", "8", "--alpha", "2", "--ellN", "4", "--A", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_cap_exits_3() {
    let out = zrp(&[
        "capacity", "--L", "4", "--N", "1000", "--alpha", "2", "--A", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn simulate_is_deterministic_and_writes_manifest() {
    let args = [
        "simulate",
        "--L", "3",
        "--N", "8",
        "--alpha", "2",
        "--ellN", "2",
        "--seed", "42",
        "--tmax", "200",
        "--replicas", "2",
    ];
    let a = zrp(&args);
    let b = zrp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce byte-identical output");

    let out_path = tmp_path("sim.json");
    let mut file_args: Vec<&str> = args.to_vec();
    let out_str = out_path.to_str().unwrap().to_string();
    file_args.push("--out");
    file_args.push(&out_str);
    let c = zrp(&file_args);
    assert!(c.status.success());
    let body = std::fs::read(&out_path).unwrap();
    let manifest: Value = serde_json::from_slice(
        &std::fs::read(format!("{out_str}.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["subcommand"], "simulate");
    assert_eq!(manifest["seed"], 42);
    let recorded = manifest["outputs"][0]["sha256"].as_str().unwrap();
    let mut h = Sha256::new();
    h.update(&body);
    assert_eq!(recorded, format!("{:x}", h.finalize()));
    std::fs::remove_file(&out_path).ok();
    std::fs::remove_file(format!("{out_str}.manifest.json")).ok();

    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["replicas"].as_array().unwrap().len(), 2);
    assert!(v["pooled"]["transitions"].as_u64().unwrap() > 0);
    assert!(v["stationarity"]["p_value"].as_f64().unwrap() > 0.0);
}

#[test]
fn trace_identity_holds() {
    let v = stdout_json(&zrp(&[
        "trace", "--L", "3", "--N", "12", "--alpha", "4", "--ellN", "2",
    ]));
    assert!(v["identity_ok"].as_bool().unwrap());
    assert!(v["rotation_invariant"].as_bool().unwrap());
    assert!(v["separation"]["singleton_cap_below_mass"].as_bool().unwrap());
    let rates = v["scaled_rate_over_hop_rate"].as_array().unwrap();
    assert_eq!(rates.len(), 3);
}
