use std::process::{Command, Output};

use serde_json::Value;

fn ptqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptqm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn oscillator_spectrum() {
    let out = ptqm(&["spectrum", "--nu", "0", "--levels", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 5);
    for (n, level) in levels.iter().enumerate() {
        let e = level["energy_re"].as_f64().unwrap();
        assert!((e - (2 * n + 1) as f64).abs() < 1e-8);
        assert_eq!(level["pt_norm_sign"].as_i64(), Some(if n % 2 == 0 { 1 } else { -1 }));
    }
    assert_eq!(doc["backend"], "spectral");
    assert_eq!(doc["basis_size"], 200);
    assert_eq!(doc["converged"], true);
}

#[test]
fn cubic_ground_state() {
    let doc = json(&ptqm(&[
        "spectrum",
        "--nu",
        "1",
        "--levels",
        "2",
        "--basis-size",
        "200",
    ]));
    let e0 = doc["levels"][0]["energy_re"].as_f64().unwrap();
    assert!((e0 - 1.156267).abs() < 1e-6);
}

#[test]
fn spectrum_csv_header() {
    let out = ptqm(&["spectrum", "--nu", "1", "--levels", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,energy_re,energy_im,pt_norm_sign"));
    assert_eq!(lines.count(), 2);
    assert!(!text.contains('\r'));
}

#[test]
fn shooting_backend() {
    let doc = json(&ptqm(&[
        "spectrum",
        "--nu",
        "2",
        "--levels",
        "3",
        "--backend",
        "shooting",
    ]));
    assert_eq!(doc["backend"], "shooting");
    assert!(doc["basis_size"].is_null());
    let e0 = doc["levels"][0]["energy_re"].as_f64().unwrap();
    assert!((e0 - 1.477_149_753_6).abs() < 1e-8);
}

#[test]
fn spectral_backend_refuses_quartic() {
    let out = ptqm(&["spectrum", "--nu", "2", "--levels", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_oscillator_passes() {
    let out = ptqm(&["verify", "--nu", "0", "--levels", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["all_passed"], true);
    assert_eq!(doc["levels"], 40);
    for check in [
        "orthonormality",
        "completeness",
        "c_squared",
        "cp_pc_conjugate",
        "cpt_completeness",
        "cpt_positivity",
    ] {
        assert_eq!(doc["checks"][check]["pass"], true, "{check}");
    }
}

#[test]
fn verify_cubic_truncation_limits() {
    let out = ptqm(&["verify", "--nu", "1", "--levels", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let completeness = &doc["checks"]["completeness"];
    assert!(completeness["residual"].as_f64().unwrap() < 1e-2);
    assert_eq!(completeness["tolerance"].as_f64(), Some(1e-2));

    let strict = ptqm(&["verify", "--nu", "1", "--levels", "20", "--tol-residual", "1e-9"]);
    assert_eq!(strict.status.code(), Some(1));
    let doc = json(&strict);
    assert_eq!(doc["checks"]["completeness"]["pass"], false);
    assert!(doc["checks"]["completeness"]["residual"].as_f64().unwrap() > 1e-9);
}

#[test]
fn unit_two_level() {
    let doc = json(&ptqm(&[
        "two-level",
        "--r",
        "1",
        "--s",
        "1",
        "--t",
        "1",
        "--theta",
        "0.5235988",
    ]));
    assert_eq!(doc["phase"], "unbroken");
    assert!((pair(&doc["eps_plus"]).0 - 1.7320508).abs() < 1e-6);
    assert!(pair(&doc["eps_minus"]).0.abs() < 1e-6);
    for (name, r) in doc["residuals"].as_object().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-12, "{name}");
    }
}

#[test]
fn broken_two_level() {
    let out = ptqm(&[
        "two-level",
        "--r",
        "1",
        "--s",
        "0.5",
        "--t",
        "0.5",
        "--theta",
        "1.5707963",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["phase"], "broken");
    let (re, im) = pair(&doc["eps_plus"]);
    assert!(re.abs() < 1e-6 && (im.abs() - 0.8660254).abs() < 1e-7);
    let (_, im_minus) = pair(&doc["eps_minus"]);
    assert!((im + im_minus).abs() < 1e-15);
    assert!(doc.get("c").is_none());
}

#[test]
fn hermitian_two_level_c_is_parity() {
    let doc = json(&ptqm(&[
        "two-level",
        "--r",
        "0",
        "--s",
        "1",
        "--t",
        "1",
        "--theta",
        "0",
    ]));
    let c = &doc["c"];
    assert_eq!(pair(&c[0][0]), (0.0, 0.0));
    assert_eq!(pair(&c[0][1]), (1.0, 0.0));
    assert_eq!(pair(&c[1][0]), (1.0, 0.0));
}

#[test]
fn exceptional_two_level_omits_c() {
    let theta = std::f64::consts::FRAC_PI_6.to_string();
    let out = ptqm(&["two-level", "--r", "1", "--s", "0.5", "--t", "0.5", "--theta", &theta]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["phase"], "exceptional");
    assert!(doc.get("c").is_none());
}

#[test]
fn sweep_quarter_steps() {
    let theta = std::f64::consts::FRAC_PI_6.to_string();
    let dir = tempfile::tempdir().unwrap();
    let boundary = dir.path().join("boundary.csv");
    let out = ptqm(&[
        "sweep",
        "--r",
        "1",
        "--theta",
        &theta,
        "--resolution",
        "5",
        "--format",
        "csv",
        "--boundary-output",
        boundary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("s,t,phase"));
    let mut previous_s = f64::NEG_INFINITY;
    let mut count = 0;
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (s, t): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        assert!(s >= previous_s);
        previous_s = s;
        if s * t > 0.25 + 1e-12 {
            assert_eq!(f[2], "unbroken");
        }
        count += 1;
    }
    assert_eq!(count, 25);
    let poly = std::fs::read_to_string(&boundary).unwrap();
    assert!(poly.starts_with("s,t\n"));
    for row in poly.lines().skip(1) {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[0] * f[1] - 0.25).abs() < 1e-12);
    }
}

#[test]
fn sweep_minimal_and_empty() {
    let out = ptqm(&[
        "sweep",
        "--r",
        "0",
        "--theta",
        "0",
        "--resolution",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);
    let out = ptqm(&["sweep", "--r", "1", "--theta", "0.5", "--s-min", "1", "--s-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ckernel_csv_size() {
    let out = ptqm(&[
        "ckernel",
        "--nu",
        "0",
        "--levels",
        "4",
        "--grid-points",
        "40",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 40 * 40);
    assert!(text.starts_with("i,j,x_re,x_im,y_re,y_im,c_re,c_im\n"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = ptqm(&["verify", "--nu", "0", "--levels", "12", "-o", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn unwritable_path() {
    let out = ptqm(&[
        "spectrum",
        "--nu",
        "0",
        "--levels",
        "2",
        "-o",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("nonexistent-dir"));
}

#[test]
fn bad_configuration() {
    assert_eq!(ptqm(&["spectrum"]).status.code(), Some(2));
    assert_eq!(ptqm(&["spectrum", "--nu", "-1"]).status.code(), Some(2));
    assert_eq!(ptqm(&["spectrum", "--nu", "0", "--levels", "0"]).status.code(), Some(2));
    assert_eq!(
        ptqm(&["spectrum", "--nu", "0", "--tol-eig", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(ptqm(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ptqm"))
        .args(["spectrum", "--nu", "0"])
        .env("PTQM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptqm"))
        .args(["spectrum", "--nu", "1", "--levels", "3", "--backend", "shooting"])
        .env("PTQM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
