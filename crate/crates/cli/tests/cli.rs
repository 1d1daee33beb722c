use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercohom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

// sl(2) with h = [e, f] and [h, e] = 2e, [h, f] = -2f, as a purely even algebra
const SL2: &str = r#"{
  "p": 5,
  "even": ["h", "e", "f"],
  "odd": [],
  "brackets": [
    {"i": 0, "j": 1, "out": [0, 2, 0]},
    {"i": 0, "j": 2, "out": [0, 0, -2]},
    {"i": 1, "j": 2, "out": [1, 0, 0]}
  ],
  "pmap": [
    {"i": 0, "out": [1, 0, 0]},
    {"i": 1, "out": [0, 0, 0]},
    {"i": 2, "out": [0, 0, 0]}
  ]
}"#;

#[test]
fn check_filiform_passes() {
    let out = run(&["check", "--p", "5", "--lambda", "1,0,0,0,0"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn check_algebra_file() {
    let path = scratch("sl2.json", SL2);
    let out = run(&[
        "check",
        "--algebra",
        path.to_str().unwrap(),
        "--module",
        "adjoint",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn broken_jacobi_is_a_semantic_failure() {
    let bad = SL2.replace(
        r#"{"i": 1, "j": 2, "out": [1, 0, 0]}"#,
        r#"{"i": 1, "j": 2, "out": [0, 1, 0]}"#,
    );
    let path = scratch("broken.json", &bad);
    let out = run(&["check", "--algebra", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn corrupted_json_is_an_input_error() {
    let path = scratch("corrupt.json", &SL2[..SL2.len() / 2]);
    let out = run(&["check", "--algebra", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn reversed_bracket_pair_is_an_input_error() {
    let bad = SL2.replace(r#""i": 0, "j": 1"#, r#""i": 1, "j": 0"#);
    let path = scratch("reversed.json", &bad);
    assert_eq!(
        code(&run(&["check", "--algebra", path.to_str().unwrap()])),
        2
    );
}

#[test]
fn unknown_flags_and_missing_files_are_input_errors() {
    assert_eq!(code(&run(&["cohom", "--bogus"])), 2);
    assert_eq!(
        code(&run(&["check", "--algebra", "/nonexistent/algebra.json"])),
        2
    );
    assert_eq!(code(&run(&["cohom", "--p", "3", "--degree", "7"])), 2);
}

#[test]
fn cohom_report_json() {
    let out = run(&[
        "cohom",
        "--p",
        "5",
        "--lambda",
        "0,0,0,0,0",
        "--degree",
        "2",
        "--restricted",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["p"], 5);
    assert_eq!(v["theory"], "restricted");
    assert_eq!(v["degree"], 2);
    assert_eq!(v["dimZ"], 23);
    assert_eq!(v["dimH"], 16);
    assert_eq!(
        v["dimZ"].as_u64().unwrap() - v["dimB"].as_u64().unwrap(),
        16
    );
    assert_eq!(v["representatives"].as_array().unwrap().len(), 16);
    let first = &v["representatives"][0];
    assert!(first.get("phi").is_some() && first.get("omega").is_some());
}

#[test]
fn cohom_ordinary_table() {
    let out = run(&["cohom", "--p", "3", "--degree", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim H"));
    assert!(text.contains("3 (even 2, odd 1)"), "{text}");
}

#[test]
fn report_is_reproducible() {
    let args = [
        "cohom",
        "--p",
        "5",
        "--lambda",
        "0,1,0,0,0",
        "--degree",
        "2",
        "--restricted",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["dimH"], 14);
}

#[test]
fn algebra_file_matches_builtin() {
    let path = scratch("sl2_cohom.json", SL2);
    let out = run(&[
        "cohom",
        "--algebra",
        path.to_str().unwrap(),
        "--degree",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["dimH"], 0);
}

#[test]
fn derivations_match_first_cohomology() {
    let out = run(&[
        "derivations",
        "--p",
        "3",
        "--lambda",
        "1,0,0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let h1 = run(&[
        "cohom",
        "--p",
        "3",
        "--lambda",
        "1,0,0",
        "--module",
        "adjoint",
        "--degree",
        "1",
        "--restricted",
        "--format",
        "json",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(&json(&h1)["dimH"].to_string()));
}

#[test]
fn extensions_succeed() {
    for seed in ["0", "1", "7"] {
        assert_eq!(
            code(&run(&["extend-central", "--p", "3", "--seed", seed])),
            0
        );
        assert_eq!(
            code(&run(&[
                "extend-module",
                "--p",
                "3",
                "--module",
                "adjoint",
                "--seed",
                seed
            ])),
            0
        );
    }
}

#[test]
fn families_json() {
    let out = run(&["families", "--p", "7", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("X^1Y^7"));
}

#[test]
fn sweep_is_deterministic_and_rejects_composites() {
    let args = [
        "sweep",
        "--p",
        "3,5",
        "--lambdas",
        "zero,units,random:3",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout);
    assert_eq!(code(&run(&["sweep", "--p", "3,4"])), 2);
    assert_eq!(code(&run(&["sweep", "--p", "2"])), 2);
}

#[test]
fn module_file_is_checked() {
    let algebra = scratch("sl2_nat.json", SL2);
    let natural = r#"{"even": ["u", "v"], "odd": [],
        "action": [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]}"#;
    let module = scratch("natural.json", natural);
    let args = |m: &str| {
        run(&[
            "check",
            "--algebra",
            algebra.to_str().unwrap(),
            "--module",
            m,
        ])
    };
    assert_eq!(code(&args(module.to_str().unwrap())), 0);
    let broken = scratch(
        "broken_module.json",
        &natural.replace("[[1, 0], [0, -1]]", "[[0, 0], [0, 0]]"),
    );
    assert_eq!(code(&args(broken.to_str().unwrap())), 1);
}
