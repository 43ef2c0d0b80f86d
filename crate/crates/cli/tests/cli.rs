use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_untouchable")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn construct_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_owned();
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn construct_even_2q_minus_1_q8() {
    let out = run(&["construct", "--q", "8", "--family", "even-2q-1", "--a", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 15);
    assert_eq!(v["family"], "EVEN_2QM1");
    assert_eq!(v["modulus"], serde_json::json!([1, 1, 0, 1]));
    assert_eq!(v["expected_size"], 15);
}

#[test]
fn odd_family_rejects_one_mod_four() {
    let out = run(&["construct", "--q", "13", "--family", "odd-2q+1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("q ≡ 3 (mod 4)"));
}

#[test]
fn bad_parameters_are_usage_errors() {
    for args in [
        &["construct", "--q", "8", "--family", "even-2q-1", "--a", "1"][..],
        &["construct", "--q", "8", "--family", "even-2q-2"],
        &["construct", "--q", "12", "--family", "even-2q-1"],
        &["construct", "--q", "8", "--family", "nonsense"],
        &["construct", "--q", "8", "--p", "2", "--k", "3", "--family", "even-2q-1"],
        &["search", "--q", "4"],
        &["verify", "--in", "/nonexistent/file.json"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn construct_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["--q", "8", "--family", "even-2q-1"],
        &["--q", "16", "--family", "even-2q-1", "--a", "5"],
        &["--p", "2", "--k", "4", "--family", "even-2q-2"],
        &["--q", "8", "--family", "even-2q+1", "--a", "3", "--b", "5"],
        &["--q", "7", "--family", "odd-2q+1"],
        &["--q", "11", "--family", "odd-2q+1", "--b", "8"],
        &["--q", "4", "--family", "hyperconic", "--a", "2"],
        &["--q", "8", "--family", "hyperconic", "--pencil", "p2", "--a", "1"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = construct_to(dir.path(), &format!("set{i}.json"), args);
        let out = run(&["verify", "--in", &path, "--expect-untouchable"]);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        assert_eq!(v["untouchable"], true);
        assert!(v["spectrum"].get("1").is_none());
    }
}

#[test]
fn verify_reports_a_witness_for_a_damaged_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "h.json", &["--q", "4", "--family", "hyperconic", "--a", "2"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["points"].as_array_mut().unwrap().pop();
    let damaged = dir.path().join("d.json");
    std::fs::write(&damaged, v.to_string()).unwrap();
    let damaged = damaged.to_str().unwrap();

    let out = run(&["verify", "--in", damaged, "--expect-untouchable"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["untouchable"], false);
    assert_eq!(r["witness"]["points"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["verify", "--in", damaged]).status.code(), Some(0));

    let full = run(&["verify", "--in", &path]);
    let r = json(&full);
    assert_eq!(r["spectrum"], serde_json::json!({"0": 6, "2": 15}));
    assert_eq!(r["even_type"], true);
}

#[test]
fn spectrum_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "s.json", &["--q", "7", "--family", "odd-2q+1"]);
    let out = run(&["spectrum", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let total: u64 = v.as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 57);
    assert!(v.get("1").is_none());
}

#[test]
fn union_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = construct_to(dir.path(), "a.json", &["--q", "8", "--family", "hyperconic", "--a", "2"]);
    let b = construct_to(dir.path(), "b.json", &["--q", "8", "--family", "hyperconic", "--pencil", "p2", "--a", "3"]);
    let out = run(&["construct", "--q", "8", "--family", "union", "--in", &a, "--in", &b]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["family"], "UNION");
    assert_eq!(v["params"]["parts"], 2);
}

#[test]
fn search_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("w.json");
    let out = run(&["search", "--q", "4", "--size", "6", "--emit-witness", witness.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["exists"], true);
    let check = run(&["verify", "--in", witness.to_str().unwrap(), "--expect-untouchable"]);
    assert_eq!(check.status.code(), Some(0));

    let out = run(&["search", "--q", "4", "--size", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["exists"], false);

    let out = run(&["search", "--q", "5", "--size", "9", "--max-nodes", "100"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["exists"], Value::Null);
    assert_eq!(v["limit"], "nodes");
}

#[test]
fn min_size_mode() {
    let out = run(&["search", "--q", "4", "--upper", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["min_size"], 6);
    let out = run(&["search", "--q", "5", "--upper", "7"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["proven_absent_below"], 8);
}

#[test]
fn census_lists_every_parameter() {
    let out = run(&["census", "--q", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["families"]["even-2q-2"], 2);
    assert_eq!(v["families"]["even-2q+1"], 15 * 14 / 2);
    let out = run(&["census", "--q", "31"]);
    assert_eq!(json(&out)["families"]["odd-2q+1"], 7);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["construct", "--q", "32", "--family", "even-2q+1", "--a", "4", "--b", "9"][..],
        &["census", "--q", "8"],
        &["search", "--q", "4", "--size", "6"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}
