use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use gaussci::graph::Dag;
use gaussci_cli::{run, Outcome};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn example() -> String {
    data("example.dag").display().to_string()
}

fn gaussci(args: &[&str]) -> Outcome {
    run(std::iter::once("gaussci").chain(args.iter().copied()))
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = gaussci(&full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    let value: Value = serde_json::from_str(&out.stdout).unwrap();
    let v = validator();
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates the schema: {errors:?}\n{value:#}");
    value
}

/// Compares against `tests/golden/<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) -> Value {
    let value = json_of(args);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let rendered = serde_json::to_string_pretty(&value).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &rendered).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(rendered, expected, "golden {name}");
    value
}

#[test]
fn text_examples() {
    let g = example();
    let out = gaussci(&["dsep", "--graph", &g, "1 _||_ 5 | 4"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "NOT d-separated\n"));
    let out = gaussci(&["dsep", "--graph", &g, "{1,2} _||_ 3"]);
    assert_eq!(out.stdout, "d-separated\n");
    let out = gaussci(&["phi", "--graph", &g, "1", "4"]);
    assert_eq!(out.stdout, "w1*l1_2*l2_4\n");
    let out = gaussci(&["decompose", "--graph", &g, "1 _||_ 5 | 4"]);
    assert_eq!(
        out.stdout,
        "union of 4 graphical models\n  without 1->2: 2->4 3->4 3->5 4->5\n  without 2->4: 1->2 3->4 3->5 4->5\n  \
         without 3->4: 1->2 2->4 3->5 4->5\n  without 3->5: 1->2 2->4 3->4 4->5\n"
    );
}

#[test]
fn golden_examples() {
    let g = example();
    let v = golden("phi_1_4", &["phi", "--graph", &g, "1", "4"]);
    assert_eq!(v["sigma"], "w1*l1_2*l2_4");
    let v = golden("phi_5_5", &["phi", "--graph", &g, "5", "5"]);
    assert_eq!(v["sigma"].as_str().unwrap().split(" + ").count(), 7);
    let v = golden("dsep_1_5_given_4", &["dsep", "--graph", &g, "1 _||_ 5 | 4"]);
    assert_eq!(v["d_separated"], false);
    let v = golden("minor_2_4_given_5", &["minor", "--graph", &g, "2 _||_ 4 | 5"]);
    assert_eq!(v["saturated"], "w3*l2_4*l3_4*l3_5*l4_5 + w3*l2_4*l3_5^2 + w5*l2_4");
    let v = golden("minor_1_5_given_4", &["minor", "--graph", &g, "1 _||_ 5 | 4"]);
    assert_eq!(v["monomial"], true);
    let v = golden("decompose_1_5_given_4", &["decompose", "--graph", &g, "1 _||_ 5 | 4"]);
    assert_eq!(v["components"].as_array().unwrap().len(), 4);
    let v = golden("decompose_saturated_1_2_given_5", &["decompose", "--saturated", "--graph", &g, "1 _||_ 2 | 5"]);
    assert_eq!(v["components"][0]["deleted"], serde_json::json!([1, 2]));
    let v = golden("decompose_1_2_given_5", &["decompose", "--graph", &g, "1 _||_ 2 | 5"]);
    assert_eq!(v["graphical"], false);
    for (name, extra) in [("implies_1_2_given_5", "1 _||_ 2 | 5"), ("implies_2_4_given_5", "2 _||_ 4 | 5")] {
        let v = golden(name, &["implies", "--graph", &g, extra, "1 _||_ 4 | 5"]);
        assert_eq!(v["verdict"], "implied");
    }
    let v = golden("implies_2_4_query_1_5", &["implies", "--graph", &g, "2 _||_ 4", "1 _||_ 5"]);
    assert_eq!(v["verdict"], "implied");
    let forward = golden("iterate", &["iterate", "--graph", &g, "1 _||_ 5 | 4", "1 _||_ 2 | 5"]);
    let backward = json_of(&["iterate", "--graph", &g, "1 _||_ 2 | 5", "1 _||_ 5 | 4"]);
    assert_eq!(forward, backward);
    assert_eq!(forward["graphs"].as_array().unwrap().len(), 1);
    let v = golden("gaussoid_close_2_4_given_5", &["gaussoid-close", "--graph", &g, "2 _||_ 4 | 5"]);
    let common: Vec<&str> = v["common"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert!(common.contains(&"1 _||_ 4 | 5") && common.contains(&"2 _||_ 4 | {1,5}"));
    let v = golden("approx_1_4_5", &["approx-implies", "--graph", &g, "1", "4", "5"]);
    assert_eq!(v["implied"], false);
}

#[test]
fn every_command_matches_the_schema() {
    let g = example();
    let w = json_of(&["witness", "--graph", &g, "1", "4", "5", "--seed", "7"]);
    assert_eq!(w["found"], true);
    let (rho_ij, rho_il) = (w["witness"]["rho_ij"].as_f64().unwrap(), w["witness"]["rho_il"].as_f64().unwrap());
    assert!(rho_il.abs() > rho_ij.abs() + 0.05);
    let w = json_of(&["witness", "--graph", &g, "1", "4", "5", "--budget", "0"]);
    assert_eq!(w["found"], false);
    let v = json_of(&["implies", "--graph", &g, "1 _||_ 2 | 5", "3 _||_ 5"]);
    assert_eq!(v["verdict"], "not_implied");
    assert_eq!(v["refuting_model"]["lambda"]["1->2"], 0.0);
    json_of(&["approx-implies", "--graph", &g, "1", "2", "4", "--given", "{3}"]);
    let chain = data("chain4.dag").display().to_string();
    let v = json_of(&["verify-n4", "--graph", &chain]);
    assert_eq!(v["summary"]["violations"], 0);
    assert!(!v["records"].as_array().unwrap().is_empty());
    for kind in ["equivalence", "trek-rule", "soundness", "approx"] {
        let v = json_of(&["sweep", kind, "--max-n", "3", "--draws", "5", "--budget", "200"]);
        assert_eq!(v["clean"], true, "{kind}");
    }
    let v = json_of(&["sweep", "mi-gap", "--max-n", "4", "--draws", "2"]);
    assert_eq!(v["clean"], true);
    let v = json_of(&["sweep", "equivalence", "--graph", &g]);
    assert_eq!(v["report"]["dags"], 1);
}

#[test]
fn emitted_graphs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("parts");
    let g = example();
    let emit = out_dir.display().to_string();
    let v = json_of(&["decompose", "--graph", &g, "1 _||_ 5 | 4", "--emit-graphs", &emit]);
    let files = v["files"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    for (file, component) in files.iter().zip(v["components"].as_array().unwrap()) {
        let text = fs::read_to_string(file.as_str().unwrap()).unwrap();
        let parsed: Dag = text.parse().unwrap();
        assert_eq!(parsed.to_text(), text);
        assert_eq!(serde_json::to_value(&parsed).unwrap(), component["graph"]);
    }
}

#[test]
fn exit_codes_and_messages() {
    let g = example();
    let out = gaussci(&["dsep", "--graph", &g, "1 _|_ 5"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("`1 _|_ 5`"), "{}", out.stderr);
    let out = gaussci(&["dsep", "--graph", &g, "1 _||_ {2,x}"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("{2,x}"), "{}", out.stderr);
    let out = gaussci(&["dsep", "1 _||_ 2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--graph"));
    let out = gaussci(&["implies", "--graph", &g, "1 _||_ 3", "1 _||_ 4"]);
    assert_eq!(out.code, 1, "already separated extra");
    let out = gaussci(&["witness", "--graph", &g, "1", "2", "3"]);
    assert_eq!(out.code, 1, "nothing to refute");
    let out = gaussci(&["frobnicate"]);
    assert_eq!(out.code, 1);

    let bad = data("bad_edge.dag").display().to_string();
    let out = gaussci(&["dsep", "--graph", &bad, "1 _||_ 2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 4") && out.stderr.contains("'2 => 3'"), "{}", out.stderr);

    let big = data("chain7.dag").display().to_string();
    let out = gaussci(&["gaussoid-close", "--graph", &big]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    let out = gaussci(&["sweep", "trek-rule", "--max-n", "6"]);
    assert_eq!(out.code, 2);
    let out = gaussci(&["dsep", "--graph", &big, "1 _||_ 7 | 4"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "d-separated\n"));
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gaussci");
    let ok = Command::new(bin).args(["phi", "--graph", &example(), "1", "4"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "w1*l1_2*l2_4\n");
    let big = data("chain7.dag").display().to_string();
    let guard = Command::new(bin).args(["gaussoid-close", "--graph", &big]).output().unwrap();
    assert_eq!(guard.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&guard.stderr).starts_with("error: "));
}
