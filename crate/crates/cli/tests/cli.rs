use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twistcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcert"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = twistcert(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    twistcert(args).status.code().unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| if c == "inf" { f64::INFINITY } else { c.parse().unwrap() }).collect())
        .collect();
    (header, rows)
}

fn write_model(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn clock_spec(g: usize, s: f64, t: f64) -> String {
    format!(
        r#"{{"kind":"clock-block","g":{g},"n_excited":{},"gap":1.0,"perturbation_strength":{s},"symmetry_perturbation":{t},"seed":7}}"#,
        2 * g
    )
}

#[test]
fn mountains_rows() {
    let text = ok(&["mountains", "--grid", "0:0.95:20", "--delta-grid", "0:2.5:51"]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["alpha", "delta", "certified_dim"]);
    assert!(rows.iter().any(|r| r[0] == 0.25 && r[1] == 0.5 && r[2] == 3.0));
    assert!(rows.iter().filter(|r| r[1] >= 2.0).all(|r| r[2] == 1.0));
    // the 1020 grid rows come first, α-major; each column is nonincreasing in δ
    for column in rows[..1020].chunks(51) {
        assert!(column.windows(2).all(|w| w[0][0] == w[1][0] && w[1][2] <= w[0][2]));
    }
    let thresholds = &rows[1020..];
    assert_eq!(thresholds.len(), 7);
    for (i, r) in thresholds.iter().enumerate() {
        let d = (i + 2) as f64;
        assert_eq!((r[0], r[2]), (1.0 / d, d));
    }
}

#[test]
fn outputs_are_reproducible() {
    let args = ["mountains", "--grid", "0:0.9:10", "--delta-grid", "0.1:1:10"];
    assert_eq!(ok(&args), ok(&args));
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", &clock_spec(3, 0.02, 1e-3));
    assert_eq!(ok(&["certify", "--model", &model]), ok(&["certify", "--model", &model]));
    let pinned = Command::new(env!("CARGO_BIN_EXE_twistcert"))
        .args(["minima", "--g", "2", "--grid", "0:1:3", "--format", "json"])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&pinned.stdout).unwrap();
    assert_eq!(v["manifest"]["timestamp"], "1700000000");
}

#[test]
fn minima_rows() {
    let (header, rows) = csv_rows(&ok(&["minima", "--g", "4,5", "--grid", "0:1:41", "--p", "2", "--k", "2"]));
    assert_eq!(header, ["g", "alpha", "p", "k", "lambda"]);
    assert_eq!(rows.len(), 82);
    for r in &rows {
        let g = r[0];
        assert!(r[4] <= 2.0 * 2f64.sqrt() * (std::f64::consts::PI / (2.0 * g)).sin() + 1e-12);
        if ((r[1] * g).round() - r[1] * g).abs() < 1e-12 {
            assert_eq!(r[4], 0.0, "root at α = {}", r[1]);
        }
    }
    let v = json(&["minima", "--g", "4", "--grid", "0.25:0.25:1", "--format", "json"]);
    assert_eq!(v["rows"][0]["lambda"], 0.0);
    assert_eq!(v["rows"][0]["p"], "inf");
}

#[test]
fn certify_models() {
    let dir = tempfile::tempdir().unwrap();
    let exact = write_model(dir.path(), "exact.json", &clock_spec(3, 0.0, 0.0));
    let v = json(&["certify", "--model", &exact]);
    assert_eq!(v["certificate"]["d_min"], 3);
    let perturbed = write_model(dir.path(), "pert.json", &clock_spec(4, 0.01, 1e-3));
    let v = json(&["certify", "--model", &perturbed]);
    assert_eq!(v["certificate"]["d_min"], 4);
    let m = &v["measurements"];
    assert!(m["xi"].as_f64().unwrap() < 1.0);
    assert!(m["delta_restricted"]["measured"].as_f64().unwrap() <= m["delta_restricted"]["bound"].as_f64().unwrap());
    assert!(v["manifest"]["parameters"]["source"]["model"].is_string());
}

#[test]
fn certify_files_matches_model_route() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen");
    let gen = ok(&["generate", "--g", "3", "--s", "0.02", "--t", "0.001", "--seed", "5", "--out", out.to_str().unwrap()]);
    let manifest: Value = serde_json::from_str(&gen).unwrap();
    let alpha = manifest["commutators"]["alpha"].as_f64().unwrap().to_string();
    let gap = manifest["gap"].as_f64().unwrap().to_string();
    let f = |n: &str| out.join(format!("{n}.txt")).to_str().unwrap().to_string();
    let from_files = json(&[
        "certify", "--h", &f("h"), "--projector", &f("projector"), "--u", &f("u"), "--v", &f("v"), "--alpha", &alpha, "--gap",
        &gap,
    ]);
    let from_model = json(&["certify", "--model", out.join("model.json").to_str().unwrap()]);
    assert_eq!(from_files["certificate"], from_model["certificate"]);
    assert_eq!(from_files["measurements"], from_model["measurements"]);
}

#[test]
fn binary_matrices_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    ok(&["generate", "--g", "2", "--matrix-format", "binary", "--out", out.to_str().unwrap()]);
    let f = |n: &str| out.join(format!("{n}.twc")).to_str().unwrap().to_string();
    let v = json(&["certify", "--h", &f("h"), "--projector", &f("projector"), "--u", &f("u"), "--v", &f("v"), "--alpha", "0.5"]);
    assert_eq!(v["certificate"]["d_min"], 2);
}

#[test]
fn check_mode() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", &clock_spec(3, 0.01, 1e-3));
    let report = dir.path().join("cert.json");
    ok(&["certify", "--model", &model, "--out", report.to_str().unwrap()]);
    let v = json(&["certify", "--check", report.to_str().unwrap()]);
    assert_eq!(v["valid"], true);
    // a bare certificate works too, and a tampered one is rejected
    let full: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let mut cert = full["certificate"].clone();
    let bare = write_model(dir.path(), "bare.json", &cert.to_string());
    assert_eq!(json(&["certify", "--check", &bare])["d_min"], 3);
    cert["d_min"] = 5.into();
    let forged = write_model(dir.path(), "forged.json", &cert.to_string());
    assert_eq!(code(&["certify", "--check", &forged]), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let wide = write_model(dir.path(), "wide.json", &clock_spec(3, 2.0, 0.0));
    assert_eq!(code(&["certify", "--model", &wide]), 2);
    assert_eq!(code(&["certify", "--h", "/nonexistent/h", "--projector", "p", "--u", "u", "--v", "v", "--alpha", "0.5"]), 1);
    let garbage = write_model(dir.path(), "garbage.txt", "2 2\n1 0 0");
    assert_eq!(code(&["certify", "--h", &garbage, "--projector", &garbage, "--u", &garbage, "--v", &garbage, "--alpha", "0.5"]), 1);
    let bad_json = write_model(dir.path(), "bad.json", "{\"kind\": \"clock-block\"");
    assert_eq!(code(&["certify", "--model", &bad_json]), 1);
    assert_eq!(code(&["certify", "--u", "x"]), 2);
    assert_eq!(code(&["mountains", "--tol", "no_such=1"]), 2);
    assert_eq!(code(&["mountains", "--grid", "0:1"]), 2);
    assert_eq!(code(&["minima", "--p", "0.5"]), 2);
}

#[test]
fn restrict_report() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", &clock_spec(3, 0.05, 0.005));
    let v = json(&["restrict", "--model", &model, "--norm", "fro"]);
    let r = &v["restriction"];
    assert_eq!(r["band_dim"], 3);
    assert_eq!(r["norm"]["k"], 9);
    for g in ["ground_u", "ground_v"] {
        for d in ["distance_full", "distance_band"] {
            assert!(r[g][d]["measured"].as_f64().unwrap() <= r[g][d]["bound"].as_f64().unwrap() + 1e-12);
        }
    }
}

#[test]
fn eigshare_reports() {
    for variant in ["general", "normal"] {
        let v = json(&["eigshare", "--variant", variant, "--n", "10", "--epsilon", "1e-3", "--seed", "3"]);
        for key in ["residual_a", "residual_b"] {
            assert!(v[key]["measured"].as_f64().unwrap() <= v[key]["bound"].as_f64().unwrap());
        }
        assert!(v["blocks"]["a_deviation"]["measured"].as_f64().unwrap() <= v["blocks"]["a_deviation"]["bound"].as_f64().unwrap());
        assert_eq!(v["vector"].as_array().unwrap().len(), 10);
    }
    let dir = tempfile::tempdir().unwrap();
    let a = write_model(dir.path(), "a.txt", "2 2\n1 0 0 0\n0 0 -1 0\n");
    let b = write_model(dir.path(), "b.txt", "2 2\n0 0 0 0\n0 0 1 0\n");
    let v = json(&["eigshare", "--a", &a, "--b", &b]);
    assert_eq!(v["residual_a"]["measured"], 0.0);
    assert_eq!(v["residual_b"]["measured"], 0.0);
}

#[test]
fn double_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let exact = write_model(
        dir.path(),
        "td.json",
        r#"{"kind":"tensor-double","g":2,"g2":3,"n_excited":6,"gap":1.0,"seed":1}"#,
    );
    let v = json(&["certify-double", "--model", &exact]);
    assert_eq!(v["certificate"]["d_min"], 6);
    assert_eq!(v["certificate"]["method"], "double-pair");
    assert_eq!(v["witness"]["gram"]["rank"], 6);
    assert!(v["witness"]["failures"].as_array().unwrap().is_empty());
    // far above the threshold: falls back to a single-pair certificate
    let loose = write_model(
        dir.path(),
        "loose.json",
        r#"{"kind":"tensor-double","g":2,"g2":3,"n_excited":6,"gap":1.0,"perturbation_strength":0.02,"symmetry_perturbation":0.01,"seed":1}"#,
    );
    let v = json(&["certify-double", "--model", &loose]);
    assert_ne!(v["certificate"]["method"], "double-pair");
    assert!(!v["witness"]["failures"].as_array().unwrap().is_empty());
}
