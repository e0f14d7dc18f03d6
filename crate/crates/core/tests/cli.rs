use std::process::Command;

use serde_json::Value;
use ybe_reflect::cli::run;
use ybe_reflect::presets;
use ybe_reflect::solution::write_solution;

fn ybe(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ybe").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn reflections_of_each_preset() {
    let (code, out, _) = ybe(&["reflections", "--preset", "ex-4-13"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().collect::<Vec<_>>(),
        ["1144", "1212", "1234", "1331", "2143", "2233", "3412", "3434", "4224", "4321"]
    );
    let (_, out, _) = ybe(&["reflections", "--preset", "ex-4-13", "--involutive"]);
    assert_eq!(out, "1234\n2143\n3412\n4321\n");
    let (_, out, _) = ybe(&["reflections", "--preset", "ex-4-19", "--equivariant"]);
    assert_eq!(out, "1234\n2143\n");
}

#[test]
fn jobs_do_not_change_output() {
    let (_, one, _) = ybe(&["reflections", "--preset", "ex-4-19", "--jobs", "1"]);
    let (_, four, _) = ybe(&["reflections", "--preset", "ex-4-19", "--jobs", "4"]);
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 10);
    let (code, _, _) = ybe(&["reflections", "--preset", "ex-4-19", "--jobs", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn json_output_parses() {
    let (code, out, _) = ybe(&["--format", "json", "reflections", "--preset", "ex-3-2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 5);
    let (_, out, _) = ybe(&["--format", "json", "verify", "--preset", "ex-4-19"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ybe"], true);
}

#[test]
fn group_command() {
    let (code, out, _) = ybe(&["group", "--preset", "ex-4-19", "--equivariant"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("order=8\nabelian=false\n"));
    assert!(out.ends_with("equivariant:\n1234\n2143\n"));
}

#[test]
fn solution_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    write_solution(&presets::example_3_2(), &path).unwrap();
    let (code, out, _) = ybe(&["reflections", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "113\n123\n213\n223\n333\n");
}

#[test]
fn malformed_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"n": 2, "sigma": [[1, 3], [1, 2]], "tau": [[1, 2], [1, 2]]}"#).unwrap();
    let (code, _, err) = ybe(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn brace_constructions() {
    let (code, out, _) = ybe(&[
        "brace", "--ring", "zp-trunc:2,4", "--restrict", "b-plus-bA", "--construct", "plus-power:2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("socle={0, b^3}"));
    assert!(out.contains("reflection=true"));
    let (code, out, _) = ybe(&["brace", "--ring", "zp-trunc:2,4", "--construct", "star-const:b"]);
    assert_eq!(code, 0);
    assert!(out.contains("reflection=true"));
    let (code, out, _) = ybe(&["brace", "--ring", "zp-trunc:2,4", "--construct", "socle-check:power:3"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn restriction_that_is_not_closed_is_rejected() {
    let (code, _, err) = ybe(&["brace", "--ring", "zp-trunc:2,3", "--restrict", "b", "--construct", "plus-power:2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn factor_command() {
    let (code, out, _) = ybe(&["factor", "--group", "d4-c4c2", "--central", "2", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("reflection=PASS"));
    // ρ is not central in D4
    let (code, _, err) = ybe(&["factor", "--group", "d4-c4c2", "--central", "1", "0"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn param_forms() {
    let (code, out, _) = ybe(&["param", "--preset", "ex-3-2", "--form", "ybe"]);
    assert_eq!((code, out.as_str()), (0, "PASS\n"));
    let (code, out, _) = ybe(&["param", "--preset", "ex-3-2", "--k", "213", "--form", "scaled", "--f", "u"]);
    assert_eq!((code, out.as_str()), (0, "PASS\n"));
    let (code, out, _) = ybe(&[
        "param", "--ring", "zp-trunc:2,4", "--restrict", "b-plus-bA", "--k", "plus-power:2", "--form", "affine",
    ]);
    assert_eq!((code, out.as_str()), (0, "PASS\n"));
    let (code, _, _) = ybe(&[
        "param", "--ring", "zp-trunc:2,4", "--restrict", "b-plus-bA", "--k", "plus-power:2", "--form", "robert",
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = ybe(&[
        "param", "--ring", "zp-trunc:3,3", "--form", "linear-comb",
        "--term", "plus-star:b^2:2/3", "--term", "plus-star:2b^2:2/3", "--term", "123456789:-1/3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("K^2=I"));
}

#[test]
fn param_failure_reports_a_mismatch() {
    // a scaled K with a non-reflection k fails the check
    let (code, out, err) = ybe(&["param", "--preset", "ex-4-13", "--k", "2134", "--form", "scaled", "--f", "u"]);
    assert_eq!(code, 1, "{err}");
    assert!(out.starts_with("FAIL\nmismatch: entry ("), "{out}");
    // the C(u,v) identity holds for any k
    assert_eq!(ybe(&["param", "--preset", "ex-4-13", "--k", "2134", "--form", "robert"]).0, 0);
}

#[test]
fn precondition_errors_exit_2() {
    let (code, _, err) = ybe(&["param", "--preset", "ex-3-2", "--k", "113", "--form", "scaled", "--f", "u"]);
    assert_eq!(code, 2);
    assert!(err.contains("precondition"));
}

#[test]
fn usage_errors() {
    assert_eq!(ybe(&["reflections"]).0, 2);
    assert_eq!(ybe(&["reflections", "--preset", "ex-3-2", "--file", "x"]).0, 2);
    assert_eq!(ybe(&["frobnicate"]).0, 2);
    assert_eq!(ybe(&["--help"]).0, 0);
    assert_eq!(ybe(&["reflections", "--preset", "nope"]).0, 2);
}

#[test]
fn binary_matches_library_entry_point() {
    let output = Command::new(env!("CARGO_BIN_EXE_ybe"))
        .args(["reflections", "--preset", "ex-3-2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "113\n123\n213\n223\n333\n");
    let output = Command::new(env!("CARGO_BIN_EXE_ybe"))
        .args(["verify", "--preset", "missing"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
