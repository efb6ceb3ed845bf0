use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solenoid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let doc = serde_json::from_slice(&out.stdout).expect("valid JSON on stdout");
    (out.status.code().unwrap(), doc)
}

#[test]
fn validate_exit_codes() {
    let (code, doc) = json(&["validate", &fixture("f.sol")]);
    assert_eq!(code, 0);
    assert_eq!(doc["pre_solenoid"], true);
    assert_eq!(doc["validation"]["flattening"]["d"], 1);

    let (code, doc) = json(&["validate", &fixture("fold.sol")]);
    assert_eq!(code, 1);
    let first = &doc["validation"]["nonfolding"]["violations"][0];
    assert_eq!((first["edge_name"].as_str(), first["position"].as_u64()), (Some("a"), Some(1)));

    let out = run(&["validate", &fixture("missing.sol")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sol");
    std::fs::write(&path, "edges: a\na -> c\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.sol:2:6:"), "{err}");
    assert!(err.contains("unknown edge"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--power", "0", &fixture("f.sol")]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--format", "yaml", &fixture("f.sol")]).status.code(), Some(2));
}

#[test]
fn analyze_examples() {
    let (code, h) = json(&["analyze", &fixture("h.sol")]);
    assert_eq!(code, 0);
    assert_eq!(h["orientable"], false);
    assert_eq!(h["h_u"]["1"]["kind"], "finite_cyclic");
    assert_eq!(h["h_u"]["1"]["torsion"], serde_json::json!([2]));
    assert_eq!(h["h_u"]["0"]["text"], "Z[1/3]");

    let (_, f) = json(&["analyze", &fixture("f.sol")]);
    assert_eq!(f["orientable"], true);
    assert_eq!(f["h_s"]["1"]["kind"], "free_cyclic");

    let (_, k) = json(&["analyze", &fixture("k.sol")]);
    assert_eq!(k["orientation"]["kind"], "positive");
    assert_eq!(k["orientation"]["flips"], serde_json::json!(["b"]));
    let text = String::from_utf8(run(&["analyze", &fixture("k.sol")]).stdout).unwrap();
    assert!(text.contains("orientation: positive with flips {b}"), "{text}");
}

#[test]
fn analyze_rejects_invalid_rules() {
    let (code, doc) = json(&["analyze", &fixture("fold.sol")]);
    assert_eq!(code, 1);
    assert_eq!(doc["pre_solenoid"], false);
}

#[test]
fn goldens_match() {
    for name in ["f", "g", "h", "k"] {
        let (code, doc) = json(&["analyze", &fixture(&format!("{name}.sol"))]);
        assert_eq!(code, 0);
        let golden: Value =
            serde_json::from_str(&std::fs::read_to_string(root().join(format!("fixtures/golden/{name}.json"))).unwrap())
                .unwrap();
        assert_eq!(doc, golden, "{name}");
    }
}

#[test]
fn goldens_record_the_expected_facts() {
    let load = |n: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(root().join(format!("fixtures/golden/{n}.json"))).unwrap()).unwrap()
    };
    let f = load("f");
    for n in ["g", "k"] {
        let other = load(n);
        for key in ["h_s", "h_u", "dim_s", "dim_u", "torsion"] {
            assert_eq!(other[key], f[key], "{n}.{key}");
        }
    }
    assert_eq!(load("g")["orientation"]["kind"], "negative");
    let h = load("h");
    assert_eq!(h["h_s"]["0"]["torsion"], serde_json::json!([2]));
    assert_eq!(h["h_s"]["0"]["quotient"]["text"], "Z[1/3]");
    assert_eq!(h["h_s"]["1"]["kind"], "zero");
    assert_eq!(h["cech"]["h1"]["abs_det"], 1);
    assert_eq!(f["dim_s"]["charpoly"], serde_json::json!([1, -4, 3]));
}

#[test]
fn output_is_deterministic() {
    for sub in ["analyze", "validate", "selfcheck", "cech", "dimgroup"] {
        let a = run(&[sub, "--format", "json", &fixture("h.sol"), &fixture("g.sol")]);
        let b = run(&[sub, "--format", "json", &fixture("h.sol"), &fixture("g.sol")]);
        assert_eq!(a.stdout, b.stdout, "{sub}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn multiple_files_keep_their_order() {
    let (code, doc) = json(&["validate", &fixture("f.sol"), &fixture("fold.sol"), &fixture("h.sol")]);
    assert_eq!(code, 1);
    let arr = doc.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert!(arr[0]["path"].as_str().unwrap().ends_with("f.sol"));
    let codes: Vec<u64> = arr.iter().map(|x| x["exit_code"].as_u64().unwrap()).collect();
    assert_eq!(codes, vec![0, 1, 0]);

    let text = String::from_utf8(run(&["validate", &fixture("f.sol"), &fixture("h.sol")]).stdout).unwrap();
    let f_at = text.find("f.sol ==").unwrap();
    let h_at = text.find("h.sol ==").unwrap();
    assert!(f_at < h_at);
}

#[test]
fn selfcheck_and_replay() {
    for name in ["f.sol", "h.sol"] {
        let (code, doc) = json(&["selfcheck", &fixture(name)]);
        assert_eq!(code, 0, "{doc}");
        assert_eq!(doc["passed"], true);
    }
    let dir = tempfile::tempdir().unwrap();
    let recorded = dir.path().join("h.json");
    let out = run(&["analyze", "--format", "json", &fixture("h.sol")]);
    std::fs::write(&recorded, &out.stdout).unwrap();
    let ok = run(&["selfcheck", &fixture("h.sol"), "--replay", recorded.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let mut doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["w"] = serde_json::json!([1, 1]);
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, doc.to_string()).unwrap();
    let bad = run(&["selfcheck", &fixture("h.sol"), "--replay", corrupted.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.contains("gamma_s(w) = w"), "{err}");
}

#[test]
fn power_flag_analyzes_the_power() {
    let (_, f1) = json(&["analyze", &fixture("f.sol")]);
    let (_, f2) = json(&["analyze", "--power", "2", &fixture("f.sol")]);
    assert_eq!(f1["dim_s"]["rank"], f2["dim_s"]["rank"]);
    assert_eq!(f2["dim_s"]["abs_det"], 9);
    assert_eq!(f2["sft"]["edges"], 18);
}

#[test]
fn cech_and_dimgroup() {
    let (code, h) = json(&["cech", &fixture("h.sol")]);
    assert_eq!(code, 0);
    assert_eq!(h["h1"]["text"], "Z^2");
    assert_eq!(h["comparison"]["invariants_equal"], false);
    let (_, g) = json(&["cech", &fixture("g.sol")]);
    assert_eq!(g["comparison"]["stationary_data_equal"], true);

    let (code, d) = json(&["dimgroup", &fixture("f.sol")]);
    assert_eq!(code, 0);
    assert_eq!(d["dim_s"]["charpoly"], serde_json::json!([1, -4, 3]));
    assert_eq!(d["gamma_s"], serde_json::json!([[2, 1], [1, 2]]));
}

#[test]
fn quiet_prints_nothing() {
    let out = run(&["--quiet", "analyze", &fixture("f.sol")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = run(&["validate", "-q", &fixture("fold.sol")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}
