use std::path::Path;
use std::process::{Command, Output};

fn iwasawa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwasawa")).args(args).env_remove("IWASAWA_FIXTURE_DIR").output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))
}

/// The payload field of a bundled fixture, written to a temp file.
fn payload(dir: &tempfile::TempDir, name: &str, field: &str) -> String {
    let text = std::fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let path = dir.path().join(format!("{name}.{field}.json"));
    std::fs::write(&path, v[field].to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn ring_omega() {
    let o = iwasawa(&["ring", "omega", "--p", "3", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["omega"], serde_json::json!([0, 3, 3, 1]));
}

#[test]
fn ring_prepare_strips_unit() {
    // (T^2 + 3)(T + 1)
    let o = iwasawa(&["ring", "prepare", "--p", "3", "--precision", "6", "T^3 + T^2 + 3*T + 3"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["distinguished"], serde_json::json!([3, 0, 1]));
}

#[test]
fn module_classify_reports_non_cyclic() {
    let d = tempfile::tempdir().unwrap();
    let f = payload(&d, "rthaine", "module");
    let o = iwasawa(&["module", "classify", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cyclic"], false);
}

#[test]
fn inconsistent_orbit_is_an_input_error() {
    let d = tempfile::tempdir().unwrap();
    let f = payload(&d, "e3", "orbit");
    let o = iwasawa(&["module", "classify", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T^3 b"));
}

#[test]
fn transition_classify_flags_axiom_violation() {
    let d = tempfile::tempdir().unwrap();
    let f = payload(&d, "e4_style", "transition");
    let o = iwasawa(&["transition", "classify", &f]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert!(v["label"].is_string());
    assert_eq!(v["ranks"]["r'"], 3);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"kernel_is_omega_b"), "{failed:?}");
}

#[test]
fn tower_simulate() {
    let o = iwasawa(&["tower", "simulate", "--p", "3", "--f", "[−3,0,1]", "--levels", "4", "--precision", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["n0"], 2);
    let md = iwasawa(&["tower", "simulate", "--p", "3", "--flat", "2", "--levels", "3", "--markdown"]);
    assert!(String::from_utf8_lossy(&md.stdout).contains("regular-flat"));
}

#[test]
fn corpus_is_deterministic() {
    let args = ["tower", "corpus", "--p", "3", "--count", "8", "--max-deg", "3", "--seed", "7"];
    let a = iwasawa(&args);
    let b = iwasawa(&args);
    assert!(a.status.code().unwrap() <= 1);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["config"]["seed"], 7);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(iwasawa(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(iwasawa(&["tower", "simulate", "--p", "3", "--f", "[1,1]"]).status.code(), Some(2));
    assert_eq!(iwasawa(&["module", "classify", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(iwasawa(&["tower", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_identities_passes() {
    let o = iwasawa(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["failed"], 0);
}

#[test]
fn fixture_dir_override() {
    let d = tempfile::tempdir().unwrap();
    for e in std::fs::read_dir(fixtures()).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), d.path().join(e.file_name())).unwrap();
    }
    let e1 = d.path().join("e1.json");
    let text = std::fs::read_to_string(&e1).unwrap().replace("terminal, initial", "stable");
    std::fs::write(&e1, text).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_iwasawa"))
        .args(["verify", "--suite", "paper-examples"])
        .env("IWASAWA_FIXTURE_DIR", d.path())
        .output()
        .unwrap();
    let v = json(&o);
    let e1_labels = v["findings"].as_array().unwrap().iter().find(|f| f["name"] == "e1.labels").unwrap().clone();
    assert_eq!(e1_labels["status"], "fail");
}
