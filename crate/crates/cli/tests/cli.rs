use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::{json, Value};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn transopt(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_transopt"));
    cmd.args(args).env_remove("TRANSOPT_EPS").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn single(out: &Output) -> Value {
    let mut all = lines(out);
    assert_eq!(all.len(), 1, "{}", String::from_utf8_lossy(&out.stdout));
    all.pop().unwrap()
}

#[test]
fn star_interval_costs_seven() {
    let out = transopt(&["solve", &data("star.json"), "--algo", "ovrp-interval"], None);
    assert_eq!(out.status.code(), Some(0));
    let env = single(&out);
    assert_eq!(env["objective"], json!(7));
    assert_eq!(env["solution"]["routes"], json!([[1, 2, 1, 3]]));
    assert_eq!(env["schema_version"], json!(1));
}

#[test]
fn jeep_exact_needs_one_gallon() {
    let out = transopt(&["solve", &data("jeep.json"), "--algo", "jeep-exact"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(single(&out)["objective"], json!(1));
}

#[test]
fn square_check_agrees() {
    let out = transopt(&["check", &data("square.json")], None);
    assert_eq!(out.status.code(), Some(0));
    let env = single(&out);
    assert_eq!(env["diagnostics"]["agreement"], json!(true));
    assert_eq!(env["objective"], json!(3));
}

#[test]
fn every_fixture_checks_out() {
    let cases = [
        ("star.json", "ovrp-greedy"),
        ("star.json", "ovrp-dp1"),
        ("star.json", "ovrp-dp2"),
        ("fuel_ab.json", "fuel"),
        ("jeep.json", "jeep-exact"),
        ("jeep.json", "jeep-fast"),
        ("triangle_graph.json", "jeep-graph-backward"),
        ("triangle_graph.json", "jeep-graph-binary"),
        ("triangle_graph.json", "jeep-graph-free"),
        ("triangle_graph.json", "jeep-graph-vertex"),
        ("square.json", "hampath-free"),
        ("curve.json", "curve-weighted"),
    ];
    for (file, algo) in cases {
        let out = transopt(&["check", &data(file), "--algo", algo], None);
        let env = single(&out);
        assert_eq!(out.status.code(), Some(0), "{file} {algo}: {env}");
        assert_eq!(env["diagnostics"]["agreement"], json!(true));
    }
}

#[test]
fn infeasible_exits_two() {
    let doc = r#"{"schema_version": 1, "problem": "jeep", "m": 1, "g": 1, "x": 4, "k": 1}"#;
    let out = transopt(&["solve", "-"], Some(doc));
    assert_eq!(out.status.code(), Some(2));
    let env = single(&out);
    assert_eq!(env["status"], json!("infeasible"));
    assert!(env.get("objective").is_none());
}

#[test]
fn schema_errors_name_the_field() {
    let doc = r#"{"schema_version": 1, "problem": "ovrp", "n": 3, "edges": [[1, 2, 2], [1, 3, 3]]}"#;
    let out = transopt(&["solve", "-"], Some(doc));
    assert_eq!(out.status.code(), Some(1));
    let env = single(&out);
    assert_eq!(env["status"], json!("error"));
    assert!(env["message"].as_str().unwrap().contains("vehicles"), "{env}");
}

#[test]
fn usage_errors_exit_one() {
    let out = transopt(&["solve", &data("star.json"), "--algo", "nope"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = transopt(&["solve", &data("star.json"), "--algo", "fuel"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(single(&out)["message"].as_str().unwrap().contains("ovrp"));
    let out = transopt(&["solve", "-"], Some("{not json"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn disagreement_fails_check() {
    let doc = r#"{"schema_version": 1, "problem": "curve", "gaps": [1, 100, 1, 1], "start": 0}"#;
    let out = transopt(&["check", "-", "--algo", "curve"], Some(doc));
    assert_eq!(out.status.code(), Some(1));
    let env = single(&out);
    assert_eq!(env["diagnostics"]["agreement"], json!(false));
    assert_eq!(env["diagnostics"]["oracle_objective"], json!(4));
}

#[test]
fn jobs_keep_input_order() {
    let seq = transopt(&["solve", &data("batch.jsonl")], None);
    let par = transopt(&["solve", "--jobs", "4", &data("batch.jsonl")], None);
    assert_eq!(seq.status.code(), Some(0));
    let strip = |out: &Output| -> Vec<Value> {
        lines(out)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("wall_time_ms");
                v
            })
            .collect()
    };
    let seq = strip(&seq);
    assert_eq!(seq, strip(&par));
    let objectives: Vec<_> = seq.iter().map(|v| v["objective"].clone()).collect();
    assert_eq!(objectives, vec![json!(7), json!(5), json!(5), json!(3)]);
    assert_eq!(seq[3]["diagnostics"]["seed"], json!(7));
}

#[test]
fn eps_comes_from_the_environment() {
    let run = |eps: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_transopt"));
        cmd.args(["solve", &data("triangle_graph.json"), "--algo", "jeep-graph-binary"]);
        match eps {
            Some(e) => cmd.env("TRANSOPT_EPS", e),
            None => cmd.env_remove("TRANSOPT_EPS"),
        };
        let out = cmd.output().unwrap();
        single(&out)["diagnostics"].clone()
    };
    assert_eq!(run(None)["epsilon"], json!(1e-6));
    let coarse = run(Some("0.01"));
    assert_eq!(coarse["epsilon"], json!(0.01));
    assert!(coarse["iterations"].as_u64() < run(None)["iterations"].as_u64());
}

#[test]
fn floats_print_seventeen_digits() {
    let out = transopt(&["solve", &data("triangle_graph.json")], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""objective":0.80000000000000004"#), "{text}");
    assert!(text.contains(r#""h":[0.80000000000000004,0.40000000000000002,0]"#), "{text}");
}

#[test]
fn bench_jeep_reports_each_k() {
    let out = transopt(
        &["bench-jeep", "--x", "1.3333333333333333", "--k-list", "10,100", "--budget-ms", "5", "--format", "json"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["k"], json!(10));
    assert!(rows[1]["exact"].as_f64().unwrap() <= rows[0]["exact"].as_f64().unwrap());
    assert!(rows[1]["fast"].as_f64().unwrap() >= rows[1]["exact"].as_f64().unwrap());
}

fn tree_doc() -> impl Strategy<Value = Value> {
    (1usize..=8, 1usize..=3)
        .prop_flat_map(|(n, p)| {
            let parents: Vec<_> = (1..n).map(|v| (0..v, 1u32..=9)).collect();
            (Just(n), Just(p), parents)
        })
        .prop_map(|(n, p, parents)| {
            let edges: Vec<_> = parents.iter().enumerate().map(|(i, &(u, len))| json!([u + 1, i + 2, len])).collect();
            json!({"schema_version": 1, "problem": "ovrp", "n": n, "edges": edges, "vehicles": p})
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn batch_check_agrees_with_oracle(docs in proptest::collection::vec(tree_doc(), 1..12)) {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        for doc in &docs {
            writeln!(file, "{doc}").unwrap();
        }
        let path = file.path().to_string_lossy().into_owned();
        for algo in ["ovrp-greedy", "ovrp-dp1", "ovrp-dp2", "ovrp-interval"] {
            let out = transopt(&["check", &path, "--algo", algo, "--jobs", "3"], None);
            prop_assert_eq!(out.status.code(), Some(0));
            prop_assert_eq!(lines(&out).len(), docs.len());
        }
    }
}
