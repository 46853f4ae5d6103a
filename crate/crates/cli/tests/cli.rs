use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use indexlab_core::prover::Certificate;
use indexlab_core::NcgCase;
use tempfile::TempDir;

const NCG4_MODEL: &str = r#"{"n":3,"p":1,"case":"NCG4","dec":{"blocks":[{"type":"rot","rho":"(-1+1*sqrt(2))/1"},{"type":"hyp","d":"2"}]}}"#;

fn indexlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indexlab"))
        .args(args)
        .env_remove("INDEXLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn betti_two_sphere() {
    let out = indexlab(&["betti", "--n", "2", "--qmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"b\":[0,1,0,2,0,2]}\n");
}

#[test]
fn empty_model_set_violates_at_n_minus_one() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "empty.json", r#"{"n":2,"models":[]}"#);
    let out = indexlab(&["morse-check", "--models", &path, "--horizon", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let first = &v["violations"][0];
    assert_eq!(first["q"], 1);
    assert_eq!(first["kind"], "alternating");
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w["q"] == 1 && w["kind"] == "pointwise" && w["lhs"] == 0 && w["rhs"] == 1));
}

#[test]
fn morse_check_accepts_a_bare_list_and_exports_csv() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "list.json", &format!("[{NCG4_MODEL}]"));
    let out = indexlab(&["morse-check", "--models", &path, "--horizon", "8", "--csv"]);
    assert_ne!(out.status.code(), Some(2), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("q,morse,betti\n"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn malformed_models_report_the_field() {
    let dir = TempDir::new().unwrap();
    let bad = r#"{"n":3,"models":[
  {"n":3,"p":"one","dec":{"blocks":[]}}
]}"#;
    let path = write(&dir, "bad.json", bad);
    let out = indexlab(&["morse-check", "--models", &path, "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("models[0].p"), "{err}");
    assert!(err.contains(":2:"), "{err}");

    let path = write(&dir, "rational.json", &NCG4_MODEL.replace("(-1+1*sqrt(2))/1", "1/3"));
    let out = indexlab(&["iterate", "--model", &path, "--mmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dec"), "{}", stderr(&out));
}

#[test]
fn missing_input_is_an_input_error() {
    let out = indexlab(&["identity", "--models", "/nonexistent/models.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn iterate_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "model.json", NCG4_MODEL);
    let a = indexlab(&["iterate", "--model", &path, "--mmax", "20"]);
    let b = indexlab(&["iterate", "--model", &path, "--mmax", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["case"], "NCG4");
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
    // i(c) = p for the first iterate
    assert_eq!(v["rows"][0]["i"], 1);
    assert!(v["mean_index"].as_str().unwrap().contains("sqrt(2)"));

    let csv = indexlab(&["iterate", "--model", &path, "--mmax", "2", "--csv"]);
    assert!(stdout(&csv).starts_with("m,i,nu,epsilon,k0\n1,1,0,"));
}

#[test]
fn a_single_geodesic_fails_the_identity() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "one.json", &format!("[{NCG4_MODEL}]"));
    let out = indexlab(&["identity", "--models", &path]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["rhs"], "1");
}

#[test]
fn prove_writes_a_verifiable_certificate() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cert.json");
    let out = indexlab(&["prove", "--n", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("NCG1"));
    let cert: Certificate = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert.n, 3);
    assert!(cert.all_resolved());
}

#[test]
fn prove_filters_by_case() {
    let out = indexlab(&["prove", "--n", "7", "--case", "ncg3"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Certificate = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!cert.traces.is_empty());
    assert!(cert.traces.iter().all(|t| t.case == NcgCase::Ncg3));
}

#[test]
fn thread_cap_is_validated() {
    let bin = env!("CARGO_BIN_EXE_indexlab");
    let run = |v: &str| {
        Command::new(bin)
            .args(["prove", "--n", "4"])
            .env("INDEXLAB_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    let bad = run("zero");
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("INDEXLAB_THREADS"));
    assert!(Path::new(bin).exists());
}

#[test]
fn bad_flags_exit_with_two() {
    assert_eq!(indexlab(&["betti", "--n", "1", "--qmax", "3"]).status.code(), Some(2));
    assert_eq!(indexlab(&["prove", "--n", "5", "--case", "ncg9"]).status.code(), Some(2));
}
