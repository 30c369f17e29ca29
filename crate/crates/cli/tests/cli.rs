use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each stdout line is JSON"))
        .collect()
}

fn single(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let mut v = lines(&out);
    assert_eq!(v.len(), 1, "stdout: {}", String::from_utf8_lossy(&out.stdout));
    (v.pop().unwrap(), out.status.code().unwrap())
}

#[test]
fn sharp_of_fig1_family() {
    let (v, code) = single(&["family", "sharp", &data("fig1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "ok");
    assert_eq!(
        v["payload"]["sharp"]["sets"],
        serde_json::json!([[1, 2], [1, 2, 3], [1, 2, 3], [1, 2, 3, 4, 5, 6]])
    );
    assert_eq!(v["payload"]["profile"], serde_json::json!([4, 4, 3, 1, 1, 1]));
}

#[test]
fn pairs_form_a_uniform_two_cover() {
    let (v, code) = single(&["family", "check", "--k", "2", &data("pairs3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["uniform"], true);
    let (v, code) = single(&["family", "check", "--k", "3", &data("pairs3.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "violated");
}

#[test]
fn elementary_compression_raises_potential() {
    let (v, _) = single(&["family", "compress", "--i", "1", "--j", "2", &data("two.json")]);
    assert_eq!(v["payload"]["output"]["sets"], serde_json::json!([[1], [1, 2, 3]]));
    assert_eq!(v["payload"]["potential"], serde_json::json!([8, 10]));
}

#[test]
fn gen1_holds_on_a_compression_pair() {
    let (v, code) = single(&[
        "entropy",
        "gen1",
        &data("d4.json"),
        &data("chain_a.json"),
        &data("chain_b.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["relation"], "compresses");
    let r = &v["payload"]["report"];
    assert!(r["lhs"].as_f64().unwrap() <= r["rhs"].as_f64().unwrap() + 1e-9);
}

#[test]
fn box_constants_of_a_copy_distribution() {
    let (v, code) = single(&["entropy", "box", &data("d3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["violations"], 0);
    assert_eq!(v["payload"]["h"], serde_json::json!([1.0, 0.0, 0.0]));
}

#[test]
fn shearer_on_pairs() {
    let (v, code) = single(&["entropy", "shearer", "--k", "2", &data("d3.json"), &data("pairs3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["report"]["lhs"], 2.0);
    assert_eq!(v["payload"]["report"]["rhs"], 3.0);
}

#[test]
fn additive_cover_bound_fails_in_z13() {
    let (v, code) = single(&[
        "sumset",
        "cd",
        "--group",
        &data("z13.json"),
        &data("s135.json"),
        &data("pairs3.json"),
        "--k",
        "2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["payload"]["report"]["lhs"], 24);
    assert_eq!(v["payload"]["report"]["rhs"], 22);
}

#[test]
fn cauchy_davenport_with_group_path_in_instance() {
    let (v, code) = single(&["sumset", "cd", &data("z13-pair.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["sumset_size"], 4);
    assert_eq!(v["payload"]["prime"], 13);
}

#[test]
fn gymr_equality_case() {
    let (v, code) = single(&["sumset", "gymr", &data("eq-case.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["report"]["lhs"], 36);
    assert_eq!(v["payload"]["report"]["rhs"], 36);
    assert_eq!(v["payload"]["report"]["equality"], true);
}

#[test]
fn marking_audit_passes() {
    let (v, code) = single(&["sumset", "marking", "--k", "2", &data("ints3.json"), &data("pairs3.json")]);
    assert_eq!(code, 0);
    for key in ["distinct_per_copy", "grid_partition", "marks_cover_members", "marks_in_restricted"] {
        assert_eq!(v["payload"]["audit"][key], true, "{key}");
    }
}

#[test]
fn fig2_products() {
    for args in [["lattice", "fig2"], ["sumset", "fig2"]] {
        let (v, code) = single(&args);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], "violated");
        assert_eq!(v["payload"]["compressed_product"], 10);
        assert_eq!(v["payload"]["family_product"], 9);
    }
}

#[test]
fn lattice_cover_holds_on_five_points() {
    let (v, code) = single(&["lattice", "cover", "--k", "2", &data("five.json"), &data("pairs3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["report"]["lhs"], 25);
    assert_eq!(v["payload"]["report"]["rhs"], 36);
}

#[test]
fn empty_search_budget() {
    let (v, code) = single(&["search", "6.1", "--budget", "0"]);
    assert_eq!(code, 0);
    let s = &v["payload"]["summary"];
    assert_eq!(s["instances"], 0);
    assert_eq!(s["infeasible"], 0);
}

#[test]
fn budgeted_search_emits_one_record_per_instance() {
    let out = run(&["--json", "search", "6.2", "--budget", "5", "--sample", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    assert_eq!(v.len(), 6);
    assert_eq!(v[5]["payload"]["summary"]["instances"], 5);
    assert_eq!(v[5]["seed"], 7);
    assert!(out.stderr.is_empty());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--json", "search", "6.2", "--budget", "40", "--sample", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["family", "sharp", &data("fig1.json")];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_with_two() {
    let out = run(&["family", "sharp", &data("broken.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(run(&["family", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["family", "sharp", &data("missing.json")]).status.code(), Some(2));
}

#[test]
fn keys_are_sorted_and_settings_echoed() {
    let out = run(&["--tol", "0.5", "--seed", "11", "family", "check", "--k", "2", &data("pairs3.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["tol"], 0.5);
    assert_eq!(v["seed"], 11);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "inputs", "payload", "seed", "tol", "verdict"]);
    let first = text.find("\"command\"").unwrap();
    let last = text.find("\"verdict\"").unwrap();
    assert!(first < last);
    assert_eq!(v["inputs"].as_str().unwrap().len(), 64);
}
