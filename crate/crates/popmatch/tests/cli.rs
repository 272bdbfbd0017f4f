use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const TRIANGLE: &str = "instance v1\na: b > c\nb: c > a\nc: a > b\n";
const PATH3: &str = "p vc 3 2\ne 1 2\ne 2 3\n";

fn dir(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&d).unwrap();
    d
}

fn file(d: &PathBuf, name: &str, text: &str) -> String {
    let p = d.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn popmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popmatch"))
        .args(args)
        .env_remove("POPMATCH_BUDGET")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["manifest"]["tool_version"].is_string());
    doc["report"].clone()
}

#[test]
fn enumerate_reports_winners() {
    let d = dir("enumerate");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let doc: Value = serde_json::from_slice(&popmatch(&["enumerate", &tri, "--flags"]).stdout).unwrap();
    assert!(doc["manifest"]["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(doc["manifest"]["config"]["command"]["enumerate"]["alpha"], "1/2");
    let r = &doc["report"];
    assert_eq!(r["mu"], 4);
    assert_eq!(r["copeland_winners"].as_array().unwrap().len(), 3);
    assert_eq!(r["popular"].as_array().unwrap().len(), 0);
    assert_eq!(r["matchings"][0]["score"], "1/2");
}

#[test]
fn elect_counts_votes() {
    let d = dir("elect");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let m = file(&d, "m.txt", "match v1\na - b\n");
    let n = file(&d, "n.txt", "match v1\nb - c\n");
    let r = report(&popmatch(&["elect", &tri, &m, &n]));
    assert_eq!(r["votes_for"], 1);
    assert_eq!(r["votes_against"], 2);
    assert_eq!(r["delta"], -1);
    assert_eq!(r["outcome"], "loss");
}

#[test]
fn fpras_does_not_depend_on_jobs() {
    let d = dir("fpras");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let args = ["fpras", &tri, "--epsilon", "1/2", "--trials", "5", "--seed", "11"];
    let one = report(&popmatch(&[&args[..], &["--jobs", "1"]].concat()));
    let four = report(&popmatch(&[&args[..], &["--jobs", "4"]].concat()));
    assert_eq!(one, four);
    assert_eq!(one["trials"].as_array().unwrap().len(), 5);
    assert_eq!(one["trials"][2]["seed"], 13);
    assert_eq!(one["all_winner_bounds_ok"], true);
    assert_eq!(one["pass_rate"], 1.0);
}

#[test]
fn fpras_full_includes_counters() {
    let d = dir("fpras_full");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let r = report(&popmatch(&["fpras", &tri, "--epsilon", "1", "--exact-uniform", "--k", "7", "--full"]));
    let t = &r["trials"][0];
    assert_eq!(t["k"], 7);
    assert_eq!(t["counters"]["samples"][0].as_array().unwrap().len(), 7);
    assert_eq!(r["backend"], "exact-uniform");
}

#[test]
fn wtscore_exact_and_apx_agree_on_triangle() {
    let d = dir("wtscore");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let exact = report(&popmatch(&["wtscore", &tri]));
    assert_eq!(exact["wt_score"], "1/2");
    assert_eq!(exact["weights"]["edges"].as_array().unwrap().len(), 3);
    let apx = report(&popmatch(&["wtscore", &tri, "--mode", "apx", "--exact-uniform", "--trials", "3"]));
    assert_eq!(apx["exact_max"], "1/2");
    assert_eq!(apx["pass_rate"], 1.0);
}

#[test]
fn reduce_writes_instance_and_map() {
    let d = dir("reduce");
    let cover = file(&d, "c.txt", PATH3);
    let map = d.join("map.json");
    let out = popmatch(&["reduce", &cover, "--aux", "2", "--map", map.to_str().unwrap()]);
    assert!(out.status.success());
    let inst = popmatch::format::parse_instance(&String::from_utf8(out.stdout).unwrap()).unwrap();
    // 3 vertex gadgets of 4 + 2 and 2 edge gadgets of 14.
    assert_eq!(inst.num_vertices(), 46);
    let map: Value = serde_json::from_str(&fs::read_to_string(map).unwrap()).unwrap();
    assert_eq!(map["report"]["edge_gadgets"].as_array().unwrap().len(), 2);
    assert_eq!(map["report"]["vertex_gadgets"][1]["aux"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_accepts_covers_and_refuses_uncovered_states() {
    let d = dir("certify");
    let cover = file(&d, "c.txt", PATH3);
    let emitted = d.join("m.txt");
    let r = report(&popmatch(&[
        "certify", &cover, "--aux", "3", "--blue", "2", "--solver", "--emit-matching",
        emitted.to_str().unwrap(),
    ]));
    assert_eq!(r["certifies_popularity"], true);
    assert_eq!(r["objective"], 0);
    assert_eq!(r["solver_popular"], true);
    assert!(r["min_inter_gadget_slack"].as_i64().unwrap() >= 1);
    assert!(fs::read_to_string(emitted).unwrap().starts_with("match v1"));

    let out = popmatch(&["certify", &cover, "--aux", "3", "--blue", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(2,3)"));
}

#[test]
fn sample_diag_reports_stationarity() {
    let d = dir("sample_diag");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let args = ["sample-diag", &tri, "--samples", "3000"];
    let r = report(&popmatch(&[&args[..], &["--jobs", "3"]].concat()));
    assert_eq!(r["mu"], 4);
    assert_eq!(r["stationarity"]["uniform_stationary"], true);
    assert!(r["total_variation_f64"].as_f64().unwrap() < 0.05);
    assert_eq!(r, report(&popmatch(&args)));
}

#[test]
fn verify_gadgets_holds() {
    let d = dir("verify_gadgets");
    let cover = file(&d, "c.txt", PATH3);
    let r = report(&popmatch(&["verify-gadgets", &cover, "--aux", "2"]));
    assert_eq!(r["all_hold"], true);
    assert_eq!(r["witnesses"].as_array().unwrap().len(), 2);
}

#[test]
fn random_is_deterministic() {
    let a = popmatch(&["random", "--n", "7", "--seed", "4"]);
    let b = popmatch(&["random", "--n", "7", "--seed", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let inst = popmatch::format::parse_instance(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(inst.num_vertices(), 7);
}

#[test]
fn output_flag_writes_file() {
    let d = dir("output");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let target = d.join("out.json");
    let out = popmatch(&["enumerate", &tri, "-o", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(doc["report"]["mu"], 4);
}

#[test]
fn input_errors_exit_with_two_and_a_position() {
    let d = dir("errors");
    let bad = file(&d, "bad.txt", "instance v1\na: b\nb:\n");
    let out = popmatch(&["enumerate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:2:4"));

    let tri = file(&d, "tri.txt", TRIANGLE);
    assert_eq!(popmatch(&["fpras", &tri, "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(popmatch(&["enumerate", &tri, "--budget", "3"]).status.code(), Some(2));
}

#[test]
fn budget_reads_the_environment() {
    let d = dir("budget");
    let tri = file(&d, "tri.txt", TRIANGLE);
    let out = Command::new(env!("CARGO_BIN_EXE_popmatch"))
        .args(["enumerate", &tri])
        .env("POPMATCH_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
