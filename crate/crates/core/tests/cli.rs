use std::path::{Path, PathBuf};
use std::process::Command;

use indexcoding::io::{InstanceFile, NetworkFile};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_indexcoding")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn p(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn verify_index_reports_rate_and_mu() {
    let (code, v) = run_json(&["verify-index", &p("butterfly-index.json"), &p("butterfly-code.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["rate"], "2");
    assert_eq!(v["mu"], 1);
    assert_eq!(v["perfect"], false);
}

#[test]
fn m_network_has_no_scalar_code() {
    let (code, v) = run_json(&["solve", "net", &p("m-network.json"), "--n", "1", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "none");
}

#[test]
fn u23_index_instance() {
    let (code, v) = run_json(&["reduce", "mat2idx", &p("u23.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["instance"]["k"], 5);
    assert_eq!(v["mu"], 3);
    let back: InstanceFile = serde_json::from_value(v["instance"].clone()).unwrap();
    assert_eq!(back.instance().unwrap().mu(), 3);
}

#[test]
fn produced_networks_parse_back() {
    let (code, v) = run_json(&["reduce", "idx2net", &p("butterfly-index.json"), "--c", "2"]);
    assert_eq!(code, 0);
    let net: NetworkFile = serde_json::from_value(v["network"].clone()).unwrap();
    assert_eq!(net.network().unwrap().m(), v["roles"].as_array().unwrap().len());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"field":[4,1],"n":1,"k":1,"clients":[]}"#).unwrap();
    let (code, out, err) = run(&["mu", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("error"));
    let (code, _, _) = run(&["no-such-verb"]);
    assert_eq!(code, 2);
}

#[test]
fn exhausted_budget_exits_3() {
    let (code, v) = run_json(&["solve", "net", &p("m-network.json"), "--n", "2", "--q", "2", "--budget", "100"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "inconclusive");
}

#[test]
fn output_is_byte_stable() {
    let args = ["solve", "index", &p("butterfly-index.json")];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&[&args[..], &["--threads", "3", "--seed", "5"]].concat());
    assert_eq!(a, b);
    let (_, c, _) = run(&["reduce", "net2idx", &p("butterfly-network.json")]);
    let (_, d, _) = run(&["reduce", "net2idx", &p("butterfly-network.json")]);
    assert_eq!(c, d);
}

#[test]
fn transports_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["transport", "net2idx", &p("butterfly-network.json"), &p("butterfly-network-code.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["perfect"], true);
    let code_path = dir.path().join("code.json");
    std::fs::write(&code_path, v["code"].to_string()).unwrap();
    let (code, v) = run_json(&["transport", "idx2net", &p("butterfly-network.json"), code_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let net_code = dir.path().join("net-code.json");
    std::fs::write(&net_code, v["code"].to_string()).unwrap();
    let (code, v) = run_json(&["verify-net", &p("butterfly-network.json"), net_code.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);

    let (code, v) = run_json(&["transport", "rep2idx", &p("u23.json"), &p("u23-rep2.json")]);
    assert_eq!(code, 0);
    std::fs::write(&code_path, v["code"].to_string()).unwrap();
    let (code, v) = run_json(&["transport", "idx2rep", &p("u23.json"), code_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rep = dir.path().join("rep.json");
    std::fs::write(&rep, v["representation"].to_string()).unwrap();
    let (_, v) = run_json(&["verify-rep", &p("u23.json"), rep.to_str().unwrap()]);
    assert_eq!(v["valid"], true);
}

#[test]
fn invalid_code_is_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("clear.json");
    // Sends both y in the clear; the client wanting x from its y cannot decode.
    std::fs::write(&code_path, r#"{"field":[2,1],"n":1,"L":{"rows":3,"cols":2,"entries":[0,0,1,0,0,1]}}"#).unwrap();
    let dir_net = dir.path().join("edge.json");
    std::fs::write(&dir_net, r#"{"nodes":1,"edges":[[null,1],[1,null]],"inputs":[1],"outputs":[2],"delta":{"2":1}}"#).unwrap();
    let (code, v) = run_json(&["transport", "idx2net", dir_net.to_str().unwrap(), code_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], false);
}

#[test]
fn axioms_and_scalar_search() {
    let (_, v) = run_json(&["axioms", &p("non-pappus.json")]);
    assert_eq!(v["axioms"], "pass");
    assert_eq!(v["bases"], 76);
    assert_eq!(v["circuits"], 86);
    let (code, v) = run_json(&["solve", "rep", &p("non-pappus.json"), "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "none");
}

#[test]
fn fixture_verb_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["fixture", "u23", "--write", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert!(dir.path().join("u23-rep2.json").exists());
    let (code, _, _) = run(&["fixture", "fano"]);
    assert_eq!(code, 2);
}

#[test]
fn report_flags_separation() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = run_json(&["reduce", "mat2idx", &p("non-pappus.json"), "--q", "3"]);
    let inst = dir.path().join("inst.json");
    std::fs::write(&inst, v["instance"].to_string()).unwrap();
    let (_, v) = run_json(&["transport", "rep2idx", &p("non-pappus.json"), &p("non-pappus-rep.json")]);
    let code = dir.path().join("code.json");
    std::fs::write(&code, v["code"].to_string()).unwrap();
    let (status, v) = run_json(&[
        "report",
        inst.to_str().unwrap(),
        "--code",
        code.to_str().unwrap(),
        "--matroid",
        &p("non-pappus.json"),
        "--scalar-search",
        "3",
    ]);
    assert_eq!(status, 0);
    assert_eq!(v["mu"], 9);
    assert_eq!(v["separations"][0]["better_n"], 2);
}

#[test]
fn text_format() {
    let (code, out, _) = run(&["mu", &p("butterfly-index.json"), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("mu: 1"));
}
