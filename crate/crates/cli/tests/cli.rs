use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EPS2: &str = r#"{"terms":[{"re":"1","im":"0","exp":"2"}]}"#;

fn sharptop(args: &[&str]) -> Output {
    sharptop_env(args, None)
}

fn sharptop_env(args: &[&str], config: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sharptop"));
    c.args(args).env_remove("SHARPTOP_CONFIG");
    if let Some(p) = config {
        c.env("SHARPTOP_CONFIG", p);
    }
    c.output().expect("binary runs")
}

fn report(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn error(o: &Output, exit: i32) -> Value {
    assert_eq!(o.status.code(), Some(exit), "stdout: {}", String::from_utf8_lossy(&o.stdout));
    assert!(o.stdout.is_empty());
    serde_json::from_slice(&o.stderr).expect("json error")
}

#[test]
fn val_of_eps_squared_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, EPS2).unwrap();
    let r = report(&sharptop(&["val", "--net", f.to_str().unwrap()]));
    assert_eq!(r["val"], "2");
    let abs = r["abs_e"].as_f64().unwrap();
    assert!((abs - (-2f64).exp()).abs() < 1e-15, "{abs}");
    assert_eq!(r["header"]["command"], "val");
    let est = r["estimate"]["estimate"]["finite"].as_f64().unwrap();
    assert!((est - 2.0).abs() < 0.05, "{est}");
}

#[test]
fn seminorm_schwartz_emits_csv_and_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.sexp");
    std::fs::write(&g, "(exp (neg (div (mul x0 x0) eps)))").unwrap();
    let csv = dir.path().join("p.csv");
    let r = report(&sharptop(&[
        "seminorm",
        "--expr",
        g.to_str().unwrap(),
        "--space",
        "schwartz",
        "--k",
        "2",
        "--grid",
        "2:10",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(r["space"], "schwartz");
    assert!(r["estimate"]["estimate"]["finite"].is_number());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,eps,value_re,value_im,magnitude"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for (row, k) in rows.iter().zip(2..) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0], k.to_string());
        assert_eq!(fields[1].parse::<f64>().unwrap(), 2f64.powi(-k));
        for f in &fields[1..] {
            let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{f}");
            let x: f64 = f.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), *f, "lossless rendering");
        }
    }
}

#[test]
fn dualnorm_table_against_closed_form() {
    let w = r#"{"kind":"pairing_vector","w":[{"terms":[{"re":"1","im":"0","exp":"0"}]},{"terms":[]}]}"#;
    let r = report(&sharptop(&["dualnorm", "--functional", w, "--norm", "euclid"]));
    assert_eq!(r["closed_form"].as_f64(), Some(1.0));
    assert_eq!(r["closed_form_val"], "0");
    assert_eq!(r["estimate_le_closed_form"], true);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len() as u64, r["probes"].as_u64().unwrap());
    assert!(rows.iter().all(|row| row["abs_e"].as_f64().unwrap() <= 1.0 + 1e-12));
}

#[test]
fn parse_and_validation_errors_exit_2() {
    let e = error(&sharptop(&["val", "--net", r#"{"terms":[{"re":"1","im":"0","exp":"1/0"}]}"#]), 2);
    assert_eq!(e["error"]["code"], "parse_error");
    assert!(e["error"]["message"].as_str().unwrap().contains("1/0"));

    let e = error(&sharptop(&["classify", "--expr", "(sin (div x0 eps)"]), 2);
    assert_eq!(e["error"]["code"], "parse_error");

    let piecewise = r#"{"breakpoints":["1/2"],"pieces":[],"tail":{"terms":[]}}"#;
    let e = error(&sharptop(&["val", "--net", piecewise]), 2);
    assert_eq!(e["error"]["code"], "invariant_error");

    let e = error(&sharptop(&["val", "--net", EPS2, "--grid", "9:3"]), 2);
    assert_eq!(e["error"]["code"], "usage_error");

    let e = error(&sharptop(&["dist", "--net", EPS2, "--other", EPS2, "--csv", "unused.csv"]), 2);
    assert_eq!(e["error"]["code"], "usage_error");
    assert!(!Path::new("unused.csv").exists());
}

#[test]
fn analysis_errors_exit_3() {
    let q = r#"{"kind":"blackbox","id":"quadratic","dim":2}"#;
    let e = error(&sharptop(&["recover", "--functional", q]), 3);
    assert_eq!(e["error"]["code"], "analysis_error");
}

#[test]
fn unknown_verb_prints_usage() {
    let o = sharptop(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Usage"), "{err}");
    assert!(err.contains("frobnicate"), "{err}");
}

#[test]
fn reports_are_byte_identical_and_echo_the_seed() {
    let w = r#"{"kind":"pairing_vector","w":[{"terms":[{"re":"1","im":"0","exp":"1"}]},{"terms":[{"re":"2","im":"0","exp":"-1/2"}]}]}"#;
    let args = ["dualnorm", "--functional", w, "--seed", "7", "--probes", "5"];
    let a = sharptop(&args);
    let b = sharptop(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["header"]["seed"], 7);
    assert_eq!(r["header"]["config"]["seed"], 7);

    let d = report(&sharptop(&["val", "--net", EPS2]));
    assert_eq!(d["header"]["seed"], 0);
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = sharptop(&["val", "--net", EPS2, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["val"], "2");
}

#[test]
fn config_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sharptop.toml");
    std::fs::write(&cfg, "grid = \"2:8\"\nseed = 4\ntol = 0.1\n").unwrap();
    let r = report(&sharptop_env(&["val", "--net", EPS2], Some(&cfg)));
    let c = &r["header"]["config"];
    assert_eq!((c["k_min"].as_i64(), c["k_max"].as_i64()), (Some(2), Some(8)));
    assert_eq!(c["tol"].as_f64(), Some(0.1));
    assert_eq!(r["header"]["seed"], 4);
    assert_eq!(r["estimate"]["window"], serde_json::json!([4, 8]));

    let r = report(&sharptop_env(&["val", "--net", EPS2, "--seed", "11", "--grid", "1:12"], Some(&cfg)));
    assert_eq!(r["header"]["seed"], 11);
    assert_eq!(r["header"]["config"]["k_max"], 12);

    std::fs::write(&cfg, "colour = \"blue\"\n").unwrap();
    let e = error(&sharptop_env(&["val", "--net", EPS2], Some(&cfg)), 2);
    assert_eq!(e["error"]["code"], "config_error");

    std::fs::write(&cfg, "floor = 0.0\n").unwrap();
    let e = error(&sharptop_env(&["val", "--net", EPS2], Some(&cfg)), 2);
    assert_eq!(e["error"]["code"], "config_error");

    let e = error(&sharptop_env(&["val", "--net", EPS2], Some(&dir.path().join("missing.toml"))), 2);
    assert_eq!(e["error"]["code"], "io_error");
}

#[test]
fn hahnbanach_witness_matches_norm() {
    let u = r#"[{"terms":[{"re":"1","im":"0","exp":"1"}]},{"terms":[{"re":"1","im":"0","exp":"0"}]}]"#;
    let r = report(&sharptop(&["hahnbanach", "--net", u]));
    assert_eq!(r["norm_val"], "0");
    assert_eq!(r["agrees"], true);
    assert!((r["witness_abs_e"].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn limit_of_truncated_series() {
    let seq = r#"[{"terms":[{"re":"1","im":"0","exp":"0"}]},
                  {"terms":[{"re":"1","im":"0","exp":"0"},{"re":"1","im":"0","exp":"1"}]},
                  {"terms":[{"re":"1","im":"0","exp":"0"},{"re":"1","im":"0","exp":"1"},{"re":"1","im":"0","exp":"2"}]}]"#;
    let r = report(&sharptop(&["limit", "--seq", seq]));
    assert_eq!(r["thresholds"], serde_json::json!(["1/2", "1/4"]));
    assert_eq!(r["val_seq_minus_limit"], serde_json::json!(["1", "2", "inf"]));
    assert_eq!(r["limit"]["breakpoints"], serde_json::json!(["1", "1/2", "1/4"]));
}

#[test]
fn classify_numbers_and_expressions() {
    let r = report(&sharptop(&["classify", "--net", r#"{"terms":[{"re":"1","im":"0","exp":"-3"}]}"#]));
    assert_eq!(r["classification"], serde_json::json!({"class": "moderate", "order": 3}));
    let r = report(&sharptop(&["classify", "--net", r#"{"terms":[]}"#, "--q-max", "6"]));
    assert_eq!(r["classification"], serde_json::json!({"class": "negligible", "order": 6}));
    let r = report(&sharptop(&["classify", "--expr", "(mul (pow eps 3) (sin x0))", "--grid", "2:12", "--q-max", "2"]));
    assert_eq!(r["classification"]["class"], "negligible");
}
