use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncchrom")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn path3_semisym_halves() {
    let v = json(&["expand", "--graph", "path:3", "--basis", "e", "--semisym"]);
    assert_eq!(v["graph"], "path:3");
    assert_eq!(v["epositive"], true);
    let terms = v["expansion"]["e"].as_array().unwrap();
    let got: Vec<(Value, Value, Value)> =
        terms.iter().map(|t| (t["lambda"].clone(), t["last"].clone(), t["coeff"].clone())).collect();
    assert_eq!(
        got,
        vec![(serde_json::json!([2, 1]), 1.into(), "1/2".into()), (serde_json::json!([3]), 3.into(), "1/2".into()),]
    );
}

#[test]
fn complete_graph_is_epositive() {
    let v = json(&["check-epositive", "--graph", "k:4"]);
    assert_eq!(v["epositive"], true);
    assert_eq!(v["semisym_epositive"], true);
    let x = json(&["expand", "--graph", "k:4", "--commutative"]);
    assert_eq!(x["expansion"]["e"], serde_json::json!([{"lambda": [4], "coeff": "24"}]));
}

#[test]
fn p_expansion_of_k2() {
    let v = json(&["expand", "--graph", "k:2", "--basis", "p"]);
    assert_eq!(v["expansion"]["p"], serde_json::json!([{"pi": "12", "coeff": "-1"}, {"pi": "1/2", "coeff": "1"}]));
    assert!(v.get("epositive").is_none());
}

#[test]
fn verify_involution_n4() {
    let v = json(&["verify-involution", "--n", "4"]);
    assert_eq!(v["violation_count"], 0);
    assert_eq!(v["total"].as_u64().unwrap(), 2 * v["pairs"].as_u64().unwrap() + v["fixed"].as_u64().unwrap());
    let s = json(&["verify-involution", "--n", "5", "--sample", "50", "--seed", "3"]);
    assert_eq!(s["violation_count"], 0);
}

#[test]
fn trace_prints_a_pair() {
    let (code, out, _) = run(&["verify-involution", "--n", "4", "--trace", "1a", "--format", "text"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "1a");
    assert!(lines[1].parse::<ncchrom::LabeledDiagram>().is_ok());
    assert!(lines[2].parse::<ncchrom::LabeledDiagram>().is_ok());
}

#[test]
fn diagram_counts() {
    assert_eq!(json(&["diagrams", "--graph", "k:2"])["count"], 6);
    // each vertex of K_n picks its left arc freely: n! arc diagrams
    assert_eq!(json(&["diagrams", "--graph", "k:3", "--kind", "arcs"])["count"], 6);
    assert_eq!(json(&["diagrams", "--graph", "k:3", "--kind", "tics"])["count"], 1 + 2 * 3 + 4 * 2);
    let (code, out, _) = run(&["diagrams", "--graph", "k:2", "--list", "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn oracle_and_cases() {
    let v = json(&["oracle", "--graph", "tl:4", "--max-colors", "4"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["checks"][3]["colorings"], 6);
    let c = json(&["cases", "--n", "3"]);
    let total: u64 = c["cases"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, json(&["diagrams", "--graph", "tl:3"])["count"].as_u64().unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["expand", "--graph", "tl:"]).0, 2);
    assert_eq!(run(&["expand", "--graph", "tl:8", "--semisym"]).0, 3);
    assert_eq!(run(&["verify-involution", "--n", "7"]).0, 3);
    assert_eq!(run(&["verify-involution", "--n", "3", "--trace", "nope"]).0, 2);
    let (_, _, err) = run(&["expand", "--graph", "k:10"]);
    assert!(err.contains("--force"), "{err}");
}

#[test]
fn output_is_deterministic_across_threads() {
    let a = run(&["expand", "--graph", "tl:5", "--semisym", "--threads", "1"]);
    let b = run(&["expand", "--graph", "tl:5", "--semisym", "--threads", "4"]);
    assert_eq!(a, b);
}
