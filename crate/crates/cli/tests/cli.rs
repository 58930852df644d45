//! End-to-end checks of the binary: golden spectra, report schema
//! round-trips, deterministic output, and the exit-status contract.

use std::process::{Command, Output};

fn biheun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biheun"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

fn cx(v: &serde_json::Value) -> (f64, f64) {
    let a = v.as_array().unwrap();
    (a[0].as_f64().unwrap(), a[1].as_f64().unwrap())
}

#[test]
fn spectrum_golden_roots() {
    // q0² + p1 q0 - 2 p0 at p0 = p1 = 1: roots {1, -2}.
    let out = biheun(&["spectrum", "--p0", "1,0", "--p1", "1,0", "--N", "1"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let roots = doc["spectrum"]["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    let (r0, i0) = cx(&roots[0]);
    let (r1, i1) = cx(&roots[1]);
    assert!((r0 + 2.0).abs() < 1e-9 && i0.abs() < 1e-9);
    assert!((r1 - 1.0).abs() < 1e-9 && i1.abs() < 1e-9);
    // Reports carry version and the tolerance block.
    assert!(doc["version"].is_string());
    assert!(doc["tolerances"]["tol_validate"].is_number());
}

#[test]
fn hermite_spectrum_golden_roots() {
    // q0² + p1 q0 + q1 at p1 = 0, q1 = -1: roots {±1}.
    let out = biheun(&[
        "hermite-spectrum",
        "--p1",
        "0,0",
        "--q1",
        "-1,0",
        "--N",
        "1",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let roots = doc["spectrum"]["roots"].as_array().unwrap();
    let (r0, _) = cx(&roots[0]);
    let (r1, _) = cx(&roots[1]);
    assert!((r0 + 1.0).abs() < 1e-9);
    assert!((r1 - 1.0).abs() < 1e-9);
}

#[test]
fn deterministic_output_and_out_file() {
    let args = [
        "spectrum", "--p0", "0.3,0.7", "--p1", "-0.2,0.4", "--N", "3",
    ];
    let first = biheun(&args);
    let second = biheun(&args);
    assert_eq!(first.stdout, second.stdout, "reports must be reproducible");

    let dir = std::env::temp_dir().join("biheun-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let mut with_out: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    with_out.extend_from_slice(&["--out", &path_str]);
    let third = biheun(&with_out);
    assert!(third.status.success());
    let file_bytes = std::fs::read(&path).unwrap();
    assert_eq!(file_bytes, third.stdout, "--out must mirror stdout exactly");
}

#[test]
fn construct_emits_parameter_lists() {
    let out = biheun(&["construct", "--p1", "0.3,0.1", "--q1", "1,0", "--N", "0"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let (beta_re, beta_im) = cx(&doc["beta"]);
    assert!((beta_re - 0.5).abs() < 1e-12 && beta_im.abs() < 1e-12);

    let terms = doc["combination"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    // Plain term: 1F1(-β/2; 1/2; ξ²).
    let (u, _) = cx(&terms[0]["upper"][0]);
    assert!((u + 0.25).abs() < 1e-10);
    let (l, _) = cx(&terms[0]["lower"][0]);
    assert!((l - 0.5).abs() < 1e-12);
    // ξ-weighted term: 1F1(1/2-β/2; 3/2; ξ²).
    assert_eq!(terms[1]["xi_power"], 1);
    let (u, _) = cx(&terms[1]["upper"][0]);
    assert!((u - 0.25).abs() < 1e-10);
    let (l, _) = cx(&terms[1]["lower"][0]);
    assert!((l - 1.5).abs() < 1e-12);

    // ξ-transform block present.
    let (scale, _) = cx(&doc["combination"]["xi_transform"]["scale"]);
    assert!((scale - 1.0).abs() < 1e-12);
}

#[test]
fn eval_representations_agree() {
    // Find an admissible q0, then evaluate every representation there.
    let spec = biheun(&[
        "hermite-spectrum",
        "--p1",
        "0.2,0.1",
        "--q1",
        "0.8,-0.4",
        "--N",
        "2",
    ]);
    let doc = json_of(&spec);
    let roots = doc["spectrum"]["roots"].as_array().unwrap();
    let (q0_re, q0_im) = cx(&roots[0]);
    let q0_arg = format!("{},{}", q0_re, q0_im);
    let out2 = biheun(&[
        "eval", "--p0", "-2,0", "--p1", "0.2,0.1", "--q0", &q0_arg, "--q1", "0.8,-0.4", "--z",
        "0.5,0.2", "--z", "1.1,-0.3",
    ]);
    assert!(out2.status.success(), "{:?}", out2);
    let doc2 = json_of(&out2);
    let reps = doc2["representations"].as_array().unwrap();
    let hermite = reps
        .iter()
        .find(|r| r["name"] == "hermite-sum")
        .expect("hermite representation present");
    let ghg = reps
        .iter()
        .find(|r| r["name"] == "ghg-combination")
        .expect("combined representation present");
    for (a, b) in hermite["values"]
        .as_array()
        .unwrap()
        .iter()
        .zip(ghg["values"].as_array().unwrap())
    {
        let av = a.as_array().unwrap();
        let bv = b.as_array().unwrap();
        let d = ((av[2].as_f64().unwrap() - bv[2].as_f64().unwrap()).powi(2)
            + (av[3].as_f64().unwrap() - bv[3].as_f64().unwrap()).powi(2))
        .sqrt();
        assert!(d < 1e-9, "representations disagree by {}", d);
    }
}

#[test]
fn validate_passes_on_spectrum_root_and_fails_off_spectrum() {
    let good = biheun(&[
        "validate",
        "--p1",
        "0.3,0.1",
        "--q1",
        "0.8,-0.4",
        "--N",
        "2",
        "--root-index",
        "1",
        "--s",
        "0.5,0",
        "--center",
        "1,0",
        "--radius",
        "0.5",
        "--count",
        "10",
    ]);
    assert!(good.status.success(), "{:?}", good);
    let doc = json_of(&good);
    assert_eq!(doc["report"]["passed"], true);

    // Seeded known-bad q0: exit 1, never 0.
    let bad = biheun(&[
        "validate", "--p1", "0.3,0.1", "--q1", "0.8,-0.4", "--N", "2", "--q0", "9,9", "--s",
        "0.5,0", "--center", "1,0", "--radius", "0.5", "--count", "10",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let doc = json_of(&bad);
    assert_eq!(doc["report"]["passed"], false);
}

#[test]
fn tolerance_env_override_applies() {
    let out = Command::new(env!("CARGO_BIN_EXE_biheun"))
        .args([
            "validate", "--p1", "0.3,0.1", "--q1", "0.8,-0.4", "--N", "1", "--s", "0.5,0",
            "--center", "1,0", "--radius", "0.4", "--count", "8",
        ])
        .env("BIHEUN_TOL_VALIDATE", "1e-15")
        .output()
        .unwrap();
    // Residual noise cannot beat 1e-15: the run must fail and report the
    // tightened tolerance it used.
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tolerances"]["tol_validate"], 1e-15);
    assert_eq!(doc["report"]["passed"], false);
}

#[test]
fn identity_check_reports_deviations() {
    let out = biheun(&["identity-check", "--trials", "60", "--seed", "11"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["passed"], true);
    assert!(doc["deviations"]["combination_n3"].as_f64().unwrap() < 1e-9);

    let csv = biheun(&[
        "identity-check",
        "--trials",
        "30",
        "--seed",
        "11",
        "--format",
        "csv",
    ]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.contains("summary,passed,true"));
}

#[test]
fn input_validation_exits_two() {
    // Malformed complex literal.
    let out = biheun(&["spectrum", "--p0", "nope", "--p1", "1,0", "--N", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // Level guard.
    let out = biheun(&["spectrum", "--p0", "1,0", "--p1", "1,0", "--N", "40"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("N"), "diagnostic names the field: {}", err);

    // Missing sampling request on eval.
    let out = biheun(&[
        "eval", "--p0", "1,0", "--p1", "0,0", "--q0", "0,0", "--q1", "0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_variant_emits_rows() {
    let out = biheun(&[
        "spectrum", "--p0", "1,0", "--p1", "1,0", "--N", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("char_poly,0,")));
    assert!(text.lines().any(|l| l.starts_with("root,0,")));
    assert!(text.lines().any(|l| l.starts_with("eigenvector,1,")));
}
