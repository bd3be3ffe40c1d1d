// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn localconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localconn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = localconn(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_edge_list_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    json(&["--rng-seed", "9", "gen", "--out", path(&file), "planted-edge-cut", "--a", "6", "--b", "6", "--c", "2"]);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("12 64\n"));
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.txt.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 9);
    assert_eq!(meta["planted"]["size"], 2);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for f in [&a, &b] {
        json(&["--rng-seed", "4", "gen", "--out", path(f), "gnp", "--n", "30", "--p", "0.2"]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn oracle_agrees_with_planted_cut() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    json(&["--rng-seed", "1", "gen", "--out", path(&file), "planted-edge-cut", "--a", "6", "--b", "6", "--c", "2"]);
    let bfs = json(&["oracle", "edgecut", "--graph", path(&file), "--directed"]);
    let dfs = json(&["oracle", "edgecut", "--graph", path(&file), "--directed", "--order", "dfs"]);
    assert_eq!(bfs["value"], 2);
    assert_eq!(dfs["value"], 2);
    let local = json(&[
        "oracle", "localwitness", "--graph", path(&file), "--directed", "--seed-vertex", "0", "--nu", "40",
        "--kmax", "3",
    ]);
    assert_eq!(local["answer"]["cut_size"], 2);
}

#[test]
fn vc_on_glued_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    json(&["gen", "--out", path(&file), "glued-cliques", "--a", "5", "--b", "5", "--shared", "2"]);
    let exact = json(&["--rng-seed", "3", "vc", "--graph", path(&file), "--exact"]);
    assert_eq!(exact["kappa"], 2);
    let check = json(&["--rng-seed", "3", "vc", "--graph", path(&file), "--k", "3", "--exact"]);
    assert_eq!(check["verdict"], "cut");
    let oracle = json(&["oracle", "vertexcut", "--graph", path(&file)]);
    assert_eq!(oracle["kappa"], 2);
}

#[test]
fn localec_finds_planted_cluster_and_writes_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let out = dir.path().join("run.json");
    json(&[
        "--rng-seed", "4", "gen", "--out", path(&file), "planted-local-cut", "--a", "6", "--c", "2", "--base",
        "6000",
    ]);
    let v = json(&[
        "--rng-seed", "5", "--json-out", path(&out), "localec", "--graph", path(&file), "--directed",
        "--seed-vertex", "0", "--nu", "40", "--k", "3", "--trials", "40",
    ]);
    assert!(v["found_rate"].as_f64().unwrap() >= 0.5);
    for t in v["trials"].as_array().unwrap() {
        if t["result"] == "found" {
            assert!(t["cut_size"].as_u64().unwrap() < 3);
        }
    }
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn localec_rejects_oversized_budget() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    json(&["gen", "--out", path(&file), "cycle", "--n", "100"]);
    let out = localconn(&[
        "--rng-seed", "1", "localec", "--graph", path(&file), "--directed", "--seed-vertex", "0", "--nu", "20",
        "--k", "2",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("volume budget"));
}

#[test]
fn tester_accepts_connected_and_rejects_far() {
    let dir = tempfile::tempdir().unwrap();
    let cube = dir.path().join("cube.txt");
    let rings = dir.path().join("rings.txt");
    json(&["gen", "--out", path(&cube), "hypercube", "--dim", "5"]);
    json(&["gen", "--out", path(&rings), "union-of-cycles", "--count", "40", "--len", "3"]);
    let ok = json(&[
        "--rng-seed", "2", "test", "--graph", path(&cube), "--property", "kvc", "--k", "3", "--eps", "0.25",
        "--trials", "5",
    ]);
    assert_eq!(ok["accept_rate"], 1.0);
    let far = json(&[
        "--rng-seed", "2", "test", "--graph", path(&rings), "--property", "kec", "--model", "bounded", "--d",
        "4", "--k", "2", "--eps", "0.1", "--trials", "5",
    ]);
    assert!(far["reject_rate"].as_f64().unwrap() > 0.5);
}

#[test]
fn suite_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("plot.csv");
    let v = json(&["suite", "split-lemmas", "--scale", "0.02", "--csv", path(&csv)]);
    assert_eq!(v["passed"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,k,eps,queries_p50,queries_p95,wall_ms_p50\n"));
}

#[test]
fn unknown_suite_fails() {
    let out = localconn(&["suite", "no-such-suite"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn missing_seed_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let out = localconn(&["gen", "--out", path(&file), "gnp", "--n", "10", "--p", "0.5"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rng seed:"));
}

#[test]
fn relaxed_localvc_reports_triples() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    json(&[
        "--rng-seed", "4", "gen", "--out", path(&file), "planted-local-cut", "--a", "6", "--c", "2", "--base",
        "3000",
    ]);
    let args = [
        "--rng-seed", "5", "localvc", "--graph", path(&file), "--directed", "--seed-vertex", "0", "--nu", "40",
        "--k", "3", "--trials", "10",
    ];
    assert!(!localconn(&args).status.success());
    let mut relaxed = args.to_vec();
    relaxed.push("--relaxed");
    let v = json(&relaxed);
    assert!(v["found_rate"].as_f64().unwrap() > 0.0);
    for t in v["trials"].as_array().unwrap() {
        if t["result"] == "found" {
            assert!(t["separator_size"].as_u64().unwrap() < 3);
            assert_eq!(
                t["left_size"].as_u64().unwrap() + t["separator_size"].as_u64().unwrap()
                    + t["right_size"].as_u64().unwrap(),
                3006
            );
        }
    }
}
