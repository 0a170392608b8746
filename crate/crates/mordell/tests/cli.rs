use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mordell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mordell")).args(args).env("MORDELL_THREADS", "2").output().expect("spawn mordell")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn construct(name: &str, dir: &Path) -> PathBuf {
    let out = dir.join(name);
    let o = mordell(&["construct", "--input", data(name).to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn approx_rows(path: &Path) -> Vec<Vec<f64>> {
    mordell::formats::read_lattice(path).unwrap().approx().to_vec()
}

#[test]
fn construct_sqrt2_field() {
    let dir = tempfile::tempdir().unwrap();
    let rows = approx_rows(&construct("sqrt2_field.json", dir.path()));
    // embeddings send √2 to -√2 and √2; scale (2√2)^(-1/2)
    let (s, c) = (2f64.sqrt(), 8f64.powf(-0.25));
    let expect = [[c, c], [-s * c, s * c]];
    for (r, row) in expect.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            assert!((rows[k][r] - x).abs() < 1e-12, "{rows:?}");
        }
    }
}

#[test]
fn construct_rational_standard_basis_is_z4() {
    let dir = tempfile::tempdir().unwrap();
    let rows = approx_rows(&construct("q4_standard.json", dir.path()));
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn construct_reports_covolume() {
    let o = mordell(&["construct", "--input", data("q4_standard.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unimodular: true"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn dependent_basis_is_an_input_error() {
    let o = mordell(&["construct", "--input", data("dependent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("rank"));
}

#[test]
fn malformed_json_names_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"algebra\": {\n    \"components\": [[\"-2\", \"0\" \"1\"]]\n  }\n}\n").unwrap();
    let o = mordell(&["construct", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn missing_input_and_bad_budget_exit_2() {
    assert_eq!(mordell(&["kappa"]).status.code(), Some(2));
    let z2 = data("z2.json");
    let o = mordell(&["kappa", "--input", z2.to_str().unwrap(), "--budget-iters", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mordell(&["kappa", "--input", z2.to_str().unwrap(), "--budget-secs", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_refuses_a_real_basis() {
    let o = mordell(&["classify", "--input", data("real_basis.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn classify_z2_table_and_json() {
    let z2 = data("z2.json");
    let o = mordell(&["classify", "--input", z2.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("2 closed orbits of 2 listed"));
    let v = stdout_json(&mordell(&["classify", "--input", z2.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["n"], 2);
    assert_eq!(v["closed"].as_array().unwrap().len(), 2);
    let o = mordell(&["classify", "--input", z2.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kappa_of_z2_is_one() {
    let v = stdout_json(&mordell(&["kappa", "--input", data("z2.json").to_str().unwrap()]));
    assert_eq!(v["certified"], true);
    assert_eq!(v["kappa_lower"], 1.0);
    assert_eq!(v["kappa_exact"], "1");
    assert_eq!(v["lattice_box"], serde_json::json!(["1", "1"]));
}

#[test]
fn kappa_with_oracle_on_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    let l = construct("sqrt2_field.json", dir.path());
    let v = stdout_json(&mordell(&["kappa", "--input", l.to_str().unwrap(), "--oracle"]));
    let exact = (1.0 + 2f64.sqrt()) / (2.0 * 2f64.sqrt());
    assert!((v["kappa_lower"].as_f64().unwrap() - exact).abs() < 1e-9);
    assert!((v["oracle"]["kappa"].as_f64().unwrap() - exact).abs() < 1e-9);
    assert!(v["oracle"]["difference"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn kappa_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let l = construct("sqrt2_field.json", dir.path());
    let run = |seed: &str| {
        let o = mordell(&["kappa", "--input", l.to_str().unwrap(), "--seed", seed, "--budget-iters", "3000"]);
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("7"), run("7"));
}

fn csv_rows(o: &Output) -> (Vec<String>, usize) {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    (header, r.records().count())
}

#[test]
fn spectrum_families() {
    let (header, rows) = csv_rows(&mordell(&["spectrum2", "--family", "sqrt:2,3,5"]));
    assert!(header.iter().any(|h| h == "kappa_oracle"));
    assert_eq!(rows, 3);
    assert_eq!(csv_rows(&mordell(&["spectrum2", "--family", "cusick:1..5"])).1, 5);
}

#[test]
fn empty_family_writes_the_header_only() {
    let o = mordell(&["spectrum2", "--family", "cusick:5..4"]);
    let (header, rows) = csv_rows(&o);
    assert_eq!(rows, 0);
    assert!(!header.is_empty());
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 1);
}

#[test]
fn spectrum_json_and_bad_family() {
    let v = stdout_json(&mordell(&["spectrum2", "--family", "sqrt:2", "--format", "json"]));
    assert_eq!(v["points"][0]["cf"], "[1;(2)]");
    assert_eq!(mordell(&["spectrum2", "--family", "cusick:x"]).status.code(), Some(2));
    assert_eq!(mordell(&["spectrum2", "--family", "fib:1..3"]).status.code(), Some(2));
}
