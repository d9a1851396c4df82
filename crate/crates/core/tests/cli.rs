use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psi-mellin")).args(args).output().unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn transform_gamma_row() {
    let out = run(&["transform", "--f", "exp(-x)", "--psi", "x", "--omega", "1", "--p", "2.5"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["p_re", "p_im", "value_re", "value_im", "err_abs", "converged"]);
    assert!((num(&rows[1][2]) - 1.329_340_388_179_137).abs() < 1e-9);
    assert_eq!(rows[1][5], "true");
}

#[test]
fn missing_flag_names_it() {
    let out = run(&["transform", "--p", "2.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--f"));
}

#[test]
fn empty_strip_keeps_the_row() {
    let out = run(&["transform", "--f", "1", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][5], "false");
}

#[test]
fn invert_gamma_and_bad_contour() {
    let out = run(&["invert", "--F", "gamma(p)", "--x", "1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((num(&csv_rows(&out)[1][1]) - (-1f64).exp()).abs() < 1e-7);
    let out = run(&["invert", "--F", "gamma(p)", "--x", "1", "--gamma", "-0.5", "--strip", "0,inf"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invert_roundtrip_summary() {
    let out = run(&["invert", "--roundtrip", "--f", "exp(-x)", "--x", "0.5,2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["max_abs_diff"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn fracop_columns_and_validation() {
    let out = run(&["fracop", "--kind", "ri", "--f", "1", "--alpha", "0.5", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(&rows[0][..4], ["x", "direct", "conjugated", "abs_diff"]);
    assert!((num(&rows[1][1]) - 1.128_379_167_095_512_6).abs() < 1e-7);
    assert!((num(&rows[1][2]) - 1.128_379_167_095_512_6).abs() < 1e-7);
    let out = run(&["fracop", "--kind", "ri", "--f", "1", "--alpha", "0", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hilfer_type_zero_is_rl() {
    let args = ["--f", "x*exp(-x)", "--psi", "ln(1+x)", "--alpha", "0.6", "--x", "0.5,1.5"];
    let h = run(&[&["fracop", "--kind", "hilfer", "--beta", "0"][..], &args[..]].concat());
    let r = run(&[&["fracop", "--kind", "rd"][..], &args[..]].concat());
    for (a, b) in csv_rows(&h).iter().zip(csv_rows(&r).iter()).skip(1) {
        assert!((num(&a[1]) - num(&b[1])).abs() < 1e-4);
    }
}

#[test]
fn solve_fde_presets() {
    let out = run(&["solve-fde", "--preset", "case3", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert!((num(&rows[1][1]) - std::f64::consts::PI.sqrt()).abs() < 1e-6);
    let out = run(&["solve-fde", "--preset", "case1", "--x", "0.5,2"]);
    for row in csv_rows(&out).iter().skip(1) {
        assert!((num(&row[1]) - num(&row[4])).abs() < 1e-8);
    }
    let out = run(&["solve-fde", "--preset", "case1", "--alpha", "2.5", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve-fde", "--preset", "case4", "--x", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x = 0.5"));
}

#[test]
fn verify_diagnostic_and_strict_threshold() {
    let out = run(&["verify", "--identity", "shifting-literal"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["diagnostics"], 1);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["rows"][0]["diagnostic"], true);
    let out = run(&["verify", "--identity", "shifting", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
    for row in v["rows"].as_array().unwrap().iter().filter(|r| r["passed"] == false) {
        let d = row["rel_diff"].as_f64().unwrap();
        assert!(d.is_finite() && d > 0.0);
    }
    let out = run(&["verify", "--identity", "no-such-identity"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.cfg");
    let out_path = dir.path().join("out.csv");
    std::fs::write(&cfg, "[common]\npsi = x\nomega = 1\n[transform]\nf = exp(-x)\np = 1; 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = out_path.to_str().unwrap();
    let out = run(&["transform", "--config", c, "--p", "3", "--out", o]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("3.0000000000000000e0,"));
    let first = std::fs::read(&out_path).unwrap();
    run(&["transform", "--config", c, "--p", "3", "--out", o]);
    assert_eq!(first, std::fs::read(&out_path).unwrap());

    std::fs::write(&cfg, "[transform]\nf = exp(-x)\np = 1\nalpha = 2\n").unwrap();
    let rejected = dir.path().join("rejected.csv");
    let out = run(&["transform", "--config", c, "--out", rejected.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
    assert!(!rejected.exists());
}

#[test]
fn convolve_bessel_value() {
    let out = run(&["convolve", "--f", "exp(-x)", "--g", "exp(-x)", "--x", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["rows"][0]["value_re"].as_f64().unwrap() - 0.227_787_745_499_067).abs() < 1e-9);
    assert_eq!(v["job"]["command"], "convolve");
}
