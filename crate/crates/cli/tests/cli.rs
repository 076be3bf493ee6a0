//! End-to-end runs of the `rfkm` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn rfkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfkm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn iris() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/iris.csv")
        .to_str()
        .unwrap()
        .to_string()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn fit_iris_auto_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = rfkm(&[
        "fit",
        "--input",
        &iris(),
        "--k",
        "auto",
        "--method",
        "rfkm",
        "--seed",
        "7",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(c["assignment"].as_array().unwrap().len(), 150);
    assert_eq!(c["representatives"].as_array().unwrap().len(), 3);
    let metrics = stdout_json(&o);
    assert!(metrics["purity"].as_f64().unwrap() > 0.5);
}

#[test]
fn zero_clusters_is_a_usage_error() {
    let o = rfkm(&["fit", "--input", &iris(), "--k", "0", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--k"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = rfkm(&["fit", "--input", &iris(), "--k", "3", "--out", "x.json", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_cluster_representative_is_column_mean() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "d.csv", "a,b\n1,10\n2,20\n6,30\n");
    let out = dir.path().join("c.json");
    let o = rfkm(&[
        "fit",
        "--input",
        path_str(&csv),
        "--k",
        "1",
        "--method",
        "km",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(c["representatives"], serde_json::json!([[3.0, 20.0]]));
}

fn eval_blue(rep: [f64; 2]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "blue.csv", "x,y\n2,1\n1,2\n2,3\n5,2\n");
    let json = write(
        dir.path(),
        "c.json",
        &format!(
            "{{\"assignment\": [0, 0, 0, 0], \"representatives\": [[{}, {}]]}}",
            rep[0], rep[1]
        ),
    );
    let o = rfkm(&["eval", "--input", path_str(&csv), "--clustering", path_str(&json)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    stdout_json(&o)
}

fn assert_near(v: &Value, key: &str, expected: f64) {
    let got = v[key].as_f64().unwrap();
    assert!((got - expected).abs() <= 0.01, "{key}: {got} vs {expected}");
}

#[test]
fn eval_four_points_black() {
    let m = eval_blue([2.5, 2.0]);
    assert_near(&m, "avg", 1.56);
    assert_near(&m, "max", 2.50);
    assert_near(&m, "var_sample", 0.43);
    assert_near(&m, "jain", 0.88);
}

#[test]
fn eval_four_points_grey() {
    let m = eval_blue([3.0, 2.0]);
    assert_near(&m, "avg", 1.71);
    assert_near(&m, "max", 2.00);
    assert_near(&m, "var_sample", 0.11);
    assert_near(&m, "jain", 0.97);
}

#[test]
fn eval_with_mismatched_rows_fails() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "blue.csv", "x,y\n2,1\n1,2\n2,3\n5,2\n");
    let json = write(
        dir.path(),
        "c.json",
        "{\"assignment\": [0, 0, 0], \"representatives\": [[0, 0]]}",
    );
    let o = rfkm(&["eval", "--input", path_str(&csv), "--clustering", path_str(&json)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_reproduces_fit_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let iris = iris();
    for extra in [&[][..], &["--normalize"][..]] {
        let fit = rfkm(
            &[
                &[
                    "fit",
                    "--input",
                    &iris,
                    "--k",
                    "3",
                    "--seed",
                    "2",
                    "--out",
                    path_str(&out),
                ],
                extra,
            ]
            .concat(),
        );
        let eval = rfkm(&[&["eval", "--input", &iris, "--clustering", path_str(&out)], extra].concat());
        let (a, b) = (stdout_json(&fit), stdout_json(&eval));
        for (key, value) in a.as_object().unwrap() {
            let (x, y) = (value.as_f64().unwrap(), b[key].as_f64().unwrap());
            assert!((x - y).abs() <= 1e-9, "{key}: {x} vs {y}");
        }
    }
}

#[test]
fn bench_writes_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "iris.toml",
        &format!("dataset = {:?}\nlabel_column = \"species\"\nrestarts = 10\n", iris()),
    );
    let out = dir.path().join("out");
    let o = rfkm(&["bench", "--config", path_str(&cfg), "--out-dir", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let methods: Vec<&str> = report["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods.len(), 2);
    let runs = std::fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 21);
    assert!(String::from_utf8_lossy(&o.stdout).contains("RFKM vs KM"));
}

#[test]
fn bench_sweep_writes_one_report_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        &format!(
            "dataset = {:?}\nlabel_column = \"species\"\nrestarts = 2\nlambda1_sweep = [0.5, 1.0, 2.0]\noutput_dir = \"res\"\n",
            iris()
        ),
    );
    let o = rfkm(&["bench", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let res = dir.path().join("res");
    let reports = std::fs::read_dir(&res)
        .unwrap()
        .filter(|e| {
            let name = e.as_ref().unwrap().file_name();
            let name = name.to_str().unwrap();
            name.starts_with("report_lambda1_") && name.ends_with(".json")
        })
        .count();
    assert_eq!(reports, 3);
    assert!(res.join("sweep.csv").exists());
}

#[test]
fn bench_missing_dataset_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "dataset = \"no_such_file.csv\"\nk = 2\n");
    let o = rfkm(&["bench", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_such_file.csv"));
}

#[test]
fn bench_schema_violation_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "dataset = \"x.csv\"\nk = 2\n[rfkm]\nphy = 3.0\n");
    let o = rfkm(&["bench", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("phy"));
}

#[test]
fn toy_cases_self_check() {
    let one = rfkm(&["toy", "--case", "1"]);
    assert_eq!(one.status.code(), Some(0));
    let text = String::from_utf8_lossy(&one.stdout);
    assert!(text.contains("black") && text.contains("grey") && !text.contains("FAIL"));

    let two = rfkm(&["toy", "--case", "2"]);
    assert_eq!(two.status.code(), Some(0));
    let text = String::from_utf8_lossy(&two.stdout);
    assert!(text.contains("Objective") && text.contains("[PASS] RFKM objective prefers right over left"));
}

#[test]
fn toy_unknown_case_is_a_usage_error() {
    assert_eq!(rfkm(&["toy", "--case", "3"]).status.code(), Some(2));
}
