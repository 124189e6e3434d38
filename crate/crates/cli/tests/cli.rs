use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tptri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tptri"))
        .args(args)
        .env_remove("TPTRI_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Replaces references to sibling schema files by their contents.
fn inline(v: &mut Value) {
    match v {
        Value::Object(map) => {
            if let Some(Value::String(r)) = map.get("$ref") {
                if r.ends_with(".schema.json") {
                    let mut sub = load(r);
                    let m = sub.as_object_mut().unwrap();
                    m.remove("$id");
                    m.remove("$schema");
                    *v = sub;
                    return inline(v);
                }
            }
            map.remove("$id");
            map.values_mut().for_each(inline);
        }
        Value::Array(items) => items.iter_mut().for_each(inline),
        _ => {}
    }
}

fn assert_valid(schema: &str, doc: &Value) {
    let mut s = load(schema);
    inline(&mut s);
    let compiled = jsonschema::JSONSchema::compile(&s).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema}: {}", msgs.join("; "));
}

#[test]
fn eulerian_csv() {
    let o = tptri(&["triangle", "--family", "eulerian", "--nmax", "5", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("1,57,302,302,57,1\n"));
}

#[test]
fn general4_specializes_to_reversed_stirling() {
    let o = tptri(&["triangle", "--family", "general4", "--params", "a=1,c=0,d=0,e=1", "--nmax", "5", "--format", "csv"]);
    assert_eq!(stdout(&o), "1\n1,0\n1,1,0\n1,3,1,0\n1,6,7,1,0\n1,10,25,15,1,0\n");
}

#[test]
fn symbolic_general6_text_and_json() {
    let o = tptri(&["triangle", "--family", "general6", "--nmax", "2", "--format", "text"]);
    assert!(stdout(&o).contains("T(2,1) = a*e + c*d + 2*c*e + g\n"));
    let o = tptri(&["triangle", "--family", "general6", "--nmax", "3"]);
    assert_valid("triangle.schema.json", &json(&o));
    let again = tptri(&["triangle", "--family", "general6", "--nmax", "3"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn triangle_errors_are_usage_errors() {
    assert_eq!(tptri(&["triangle", "--family", "nope", "--nmax", "3"]).status.code(), Some(3));
    assert_eq!(tptri(&["triangle", "--family", "general4", "--params", "a=x*y", "--nmax", "3"]).status.code(), Some(3));
    // symbolic entries have no CSV form
    assert_eq!(tptri(&["triangle", "--family", "general4", "--nmax", "3", "--format", "csv"]).status.code(), Some(3));
    assert_eq!(tptri(&["triangle", "--nmax", "3"]).status.code(), Some(3));
}

#[test]
fn check_certifies_general6() {
    let o = tptri(&["check", "--family", "general6", "--n", "6", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("check.schema.json", &v);
    assert_eq!(v["report"]["status"], "certified");
    assert_eq!(v["report"]["minors_checked"], 923);
}

#[test]
fn check_certifies_ace_seq() {
    let o = tptri(&["check", "--family", "ace-seq", "--n", "7", "--jobs", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_refutes_planted() {
    let o = tptri(&["check", "--family", "planted", "--n", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_valid("check.schema.json", &v);
    assert_eq!(v["report"]["witness"]["minor"]["rows"], serde_json::json!([1, 2]));
    assert_eq!(v["report"]["witness"]["coefficient"], "-5");
}

#[test]
fn report_body_independent_of_jobs() {
    let a = json(&tptri(&["check", "--family", "general4", "--params", "d=0", "--n", "7", "--jobs", "1"]));
    let b = json(&tptri(&["check", "--family", "general4", "--params", "d=0", "--n", "7", "--jobs", "4"]));
    assert_eq!(a["report"], b["report"]);
    let env = Command::new(env!("CARGO_BIN_EXE_tptri"))
        .args(["check", "--family", "general4", "--params", "d=0", "--n", "7"])
        .env("TPTRI_JOBS", "3")
        .output()
        .unwrap();
    let c = json(&env);
    assert_eq!(c["meta"]["jobs"], 3);
    assert_eq!(a["report"], c["report"]);
}

#[test]
fn partial_coverage_and_budget_exit_two() {
    let o = tptri(&["check", "--family", "eulerian", "--n", "6", "--rmax", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["report"]["status"], "partial");
    assert_eq!(tptri(&["check", "--family", "eulerian", "--n", "6", "--budget-seconds", "0"]).status.code(), Some(4));
}

#[test]
fn checkpoint_resume_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ck");
    let ck = ck.to_str().unwrap();
    let base = ["check", "--family", "general6", "--n", "6", "--chunk-size", "40"];
    let full = json(&tptri(&base));
    let first = tptri(&[&base[..], &["--checkpoint", ck, "--budget-chunks", "7"]].concat());
    assert_eq!(first.status.code(), Some(2));
    let resumed = tptri(&[&base[..], &["--checkpoint", ck, "--resume", "--jobs", "3"]].concat());
    assert_eq!(resumed.status.code(), Some(0));
    let resumed = json(&resumed);
    assert_eq!(resumed["meta"]["resumed_from_chunk"], 7);
    assert_eq!(resumed["report"], full["report"]);
    // a different matrix against the same checkpoint
    let other = tptri(&["check", "--family", "general4", "--n", "6", "--checkpoint", ck, "--resume"]);
    assert_eq!(other.status.code(), Some(4));
    assert_eq!(tptri(&["check", "--family", "general6", "--n", "6", "--resume"]).status.code(), Some(3));
}

#[test]
fn crosscheck_suites_pass() {
    for args in [
        &["crosscheck", "--suite", "prop21", "--nmax", "7"][..],
        &["crosscheck", "--suite", "lemma22", "--nmax", "8"],
        &["crosscheck", "--suite", "reversal", "--nmax", "7"],
        &["crosscheck", "--suite", "network", "--nmax", "6"],
        &["crosscheck", "--suite", "lgv", "--nmax", "5", "--minor-size", "3"],
    ] {
        let o = tptri(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        let v = json(&o);
        assert_valid("crosscheck.schema.json", &v);
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn crosscheck_bijection_reports_cells() {
    let o = tptri(&["crosscheck", "--suite", "bijection", "--nmax", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("crosscheck.schema.json", &v);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 45);
    assert!(cells.iter().all(|c| c["partitions"] == c["paths"]));
    let total: u64 = cells.iter().map(|c| c["partitions"].as_u64().unwrap()).sum();
    // Bell numbers 1..=9
    assert_eq!(total, 1 + 2 + 5 + 15 + 52 + 203 + 877 + 4140 + 21147);
}

#[test]
fn crosscheck_guard_is_an_error() {
    let o = tptri(&["crosscheck", "--suite", "prop21", "--nmax", "11"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
}

#[test]
fn network_dumps() {
    let o = tptri(&["network", "--net", "dprime", "--nmax", "3"]);
    assert!(o.status.success());
    assert_valid("network.schema.json", &json(&o));
    let o = tptri(&["network", "--net", "d", "--nmax", "4", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph \"D\""));
    let o = tptri(&["network", "--net", "d", "--nmax", "4", "--format", "matrix"]);
    let v = json(&o);
    assert_valid("triangle.schema.json", &v);
    // S(4,2) = 7
    assert_eq!(v["rows"][4][2]["terms"][0][1], "7");
    let o = tptri(&["network", "--net", "dprime", "--nmax", "4", "--format", "matrix", "--specialize", "ace"]);
    let expected = tptri(&["triangle", "--family", "general4", "--params", "d=0", "--nmax", "4"]);
    assert_eq!(json(&o)["rows"], json(&expected)["rows"]);
    assert_eq!(tptri(&["network", "--net", "dprime", "--nmax", "2", "--specialize", "ace"]).status.code(), Some(3));
}

#[test]
fn bijection_round_trips() {
    let o = tptri(&["bijection", "--partition", "158|239|47|6"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_valid("bijection.schema.json", &v);
    assert_eq!(v["order"], serde_json::json!([1, 5, 6, 4, 7, 8, 2, 3, 9]));
    let word = v["word"].as_str().unwrap().to_string();
    let back = tptri(&["bijection", "--word", &word, "--n", "8", "--k", "5"]);
    assert!(back.status.success());
    assert_eq!(json(&back)["partition"], "158|239|47|6");
}

#[test]
fn bijection_reports_violations() {
    let o = tptri(&["bijection", "--word", "a(2,2,0) a(1,1,1) e(0,2)", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_valid("bijection.schema.json", &v);
    assert_eq!(v["violation"]["position"], 1);
    assert_eq!(tptri(&["bijection", "--word", "e(0,0)"]).status.code(), Some(3));
    assert_eq!(tptri(&["bijection", "--partition", "12|2"]).status.code(), Some(3));
}

#[test]
fn schemas_reject_malformed_documents() {
    let bad = serde_json::json!({ "vars": [], "terms": [[[], 5]] });
    let result = std::panic::catch_unwind(|| assert_valid("polynomial.schema.json", &bad));
    assert!(result.is_err());
    let mut v = json(&tptri(&["check", "--family", "planted", "--n", "3"]));
    v["report"]["status"] = "maybe".into();
    assert!(std::panic::catch_unwind(|| assert_valid("check.schema.json", &v)).is_err());
}
