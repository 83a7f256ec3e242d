use std::io::Write;
use std::process::{Command, Stdio};

use detsum_cli::{parse_instance, CliError, Instance, Report};

fn detsum(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_detsum"))
        .args(args)
        .env_remove("DETSUM_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn input_error(text: &str) -> String {
    match parse_instance(text) {
        Err(CliError::Input(msg)) => msg,
        other => panic!("expected an input error, got {other:?}"),
    }
}

#[test]
fn parses_matrix_tuple() {
    let doc = r#"{"kind":"matrix-tuple","shape":[2,2],"matrices":[[["1/2","0"],["0","-3"]],[["1","2"],["3","4"]]]}"#;
    let Instance::MatrixTuple(t) = parse_instance(doc).unwrap() else { panic!() };
    assert_eq!(t.shape().sizes(), &[2, 2]);
    assert_eq!(detsum::format_rational(&t.det_product().unwrap()), "3");
}

#[test]
fn reports_context_for_bad_input() {
    assert!(input_error("{\"kind\": ").contains("line 1"));
    let bad_rat = r#"{"kind":"colorful","n":1,"matrices":[[["1/0"]]]}"#;
    assert!(input_error(bad_rat).starts_with("matrices[0][0][0]"));
    let short = r#"{"kind":"colorful","n":2,"matrices":[[["1","0"],["0","1"]]]}"#;
    assert!(input_error(short).contains("expected 2 matrices"));
    let edges = r#"{"kind":"spinor","n":3,"edges":[{"i":1,"j":2,"p1":["1","0"],"p2":["0","1"]}]}"#;
    assert!(input_error(edges).contains("need 3 edges"));
    let dup = r#"{"kind":"spinor","n":2,"edges":[{"i":2,"j":1,"p1":["1","0"],"p2":["0","1"]}]}"#;
    assert!(input_error(dup).starts_with("edges[0]"));
    assert!(input_error(r#"{"kind":"tensor"}"#).contains("unknown kind"));
}

#[test]
fn exit_codes() {
    assert_eq!(detsum(&["verify-svrtan", "--n", "4", "--seed", "7"], None).2, 0);
    let (out, _, code) = detsum(&["alon-tarsi", "--n", "3"], None);
    assert_eq!(code, 0);
    assert!(out.contains("invariant: 0"));
    assert_eq!(detsum(&["verify-onn", "--input", "/nonexistent.json"], None).2, 2);
    assert_eq!(detsum(&["verify-svrtan", "--input", "-"], Some("[1,2")).2, 2);
    assert_eq!(detsum(&["verify-svrtan", "--n", "6", "--term-budget", "100"], None).2, 3);
    assert_eq!(detsum(&["alon-tarsi", "--n", "9"], None).2, 3);
    assert_eq!(detsum(&["census", "--n", "4", "--threads", "0"], None).2, 2);
    let cap = detsum(&["svrtan-search", "--input", "-", "--node-cap", "1"], Some(SINGULAR_SPINOR));
    assert_eq!(cap.2, 3);
}

const SINGULAR_SPINOR: &str = r#"{"kind":"spinor","n":2,"edges":[{"i":1,"j":2,"p1":["2","5"],"p2":["4","10"]}]}"#;

#[test]
fn singular_searches_exhaust_with_explanation() {
    let (out, _, code) = detsum(&["svrtan-search", "--input", "-", "--format", "json"], Some(SINGULAR_SPINOR));
    assert_eq!(code, 1);
    let report: Report = serde_json::from_str(&out).unwrap();
    assert!(!report.verdict);
    assert!(report.notes.iter().any(|n| n.contains("not guaranteed")));

    let singular = r#"{"kind":"colorful","n":2,"matrices":[[["1","0"],["0","1"]],[["1","1"],["0","0"]]]}"#;
    let (out, _, code) = detsum(&["rota-search", "--input", "-", "--format", "json"], Some(singular));
    assert_eq!(code, 1);
    let report: Report = serde_json::from_str(&out).unwrap();
    assert!(report.notes.iter().any(|n| n.contains("not guaranteed")));
}

#[test]
fn json_reports_round_trip() {
    for args in [
        &["verify-onn", "--n", "2", "--seed", "3"][..],
        &["rota-search", "--n", "2", "--seed", "3"],
        &["svrtan-search", "--n", "3", "--seed", "3"],
        &["census", "--n", "3"],
        &["alon-tarsi", "--n", "5"],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let (out, _, code) = detsum(&full, None);
        assert_eq!(code, 0, "{args:?}");
        let report: Report = serde_json::from_str(&out).unwrap();
        let again: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(again, report);
        assert_eq!(report.to_json() + "\n", out);
    }
}

#[test]
fn errors_in_json_mode_stay_on_stdout() {
    let (out, _, code) = detsum(&["verify-svrtan", "--input", "-", "--format", "json"], Some("{}"));
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn generated_instances_are_reproducible() {
    let a = detsum(&["generate", "--kind", "spinor", "--n", "5", "--seed", "42"], None).0;
    let b = detsum(&["generate", "--kind", "spinor", "--n", "5", "--seed", "42"], None).0;
    assert_eq!(a, b);
    let Instance::Spinor(s) = parse_instance(&a).unwrap() else { panic!() };
    assert!(s.is_nonsingular());
    assert_eq!(s.edge_count(), 10);
    let c = detsum(&["generate", "--kind", "colorful", "--n", "2", "--seed", "42"], None).0;
    let Instance::Colorful(c) = parse_instance(&c).unwrap() else { panic!() };
    assert!(c.tuple().is_nonsingular().unwrap());
}

#[test]
fn file_input_matches_seeded_run() {
    let generated = detsum(&["generate", "--kind", "colorful", "--n", "3", "--seed", "8"], None).0;
    let path = std::env::temp_dir().join(format!("detsum-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, &generated).unwrap();
    let from_file = detsum(&["verify-onn", "--input", path.to_str().unwrap()], None).0;
    let from_seed = detsum(&["verify-onn", "--n", "3", "--seed", "8"], None).0;
    std::fs::remove_file(&path).unwrap();
    assert_eq!(from_file, from_seed);
}

#[test]
fn thread_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_detsum"))
        .args(["census", "--n", "4"])
        .env("DETSUM_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_detsum"))
        .args(["census", "--n", "4"])
        .env("DETSUM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let plain = detsum(&["census", "--n", "3", "--format", "json"], None).0;
    assert!(!plain.contains("elapsed_us"));
    let timed = detsum(&["census", "--n", "3", "--format", "json", "--timing"], None).0;
    assert!(timed.contains("elapsed_us"));
}
