use std::io::Write;
use std::process::{Command, Output};

fn lingual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lingual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = lingual(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    lingual(args).status.code().unwrap()
}

#[test]
fn homcount_examples() {
    assert_eq!(stdout(&["homcount", "os", "2", "4"]), "7\n");
    assert_eq!(stdout(&["homcount", "oi:1", "0", "5"]), "1\n");
    assert_eq!(stdout(&["homcount", "fa", "2", "3"]), "9\n");
    // OS^2: S(3,1) * S(3,2) = 3
    assert_eq!(stdout(&["homcount", "os^2", "1,2", "3,3"]), "3\n");
}

#[test]
fn series_examples() {
    assert_eq!(
        stdout(&["series", "projective", "--cat", "os", "--n", "2"]),
        "series: t^2/((1-t)(1-2t))\n"
    );
    assert_eq!(
        stdout(&["series", "projective", "--cat", "oi:2", "--n", "0"]),
        "series: 1/(1-2t)\n"
    );
    let out = stdout(&["series", "ideal", "--cat", "oi:1", "--n", "1", "--gens", "10", "--expand", "6"]);
    assert!(out.lines().any(|l| l == "coefficients: 0,0,1,2,3,4,5"), "{out}");
    let out = stdout(&["series", "quotient", "--cat", "oi:1", "--n", "1", "--gens", "10", "--expand", "4"]);
    assert!(out.lines().any(|l| l == "coefficients: 0,1,1,1,1"), "{out}");
}

#[test]
fn egf_output() {
    let out = stdout(&["series", "projective", "--cat", "os", "--n", "2", "--egf"]);
    assert!(out.lines().any(|l| l == "egf: (1/2)e^(2t) - e^t + 1/2"), "{out}");
}

#[test]
fn expression_and_grammar_subjects() {
    let out = stdout(&["series", "expr", "--expr", "'1'[1]*'2'[12]*", "--expand", "3"]);
    assert!(out.lines().any(|l| l == "coefficients: 0,0,1,3"), "{out}");
    assert!(out.lines().any(|l| l == "ordered: true"), "{out}");
    // no ordered automaton exists; the series still comes out right
    let out = stdout(&["series", "expr", "--expr", "[ab]*'a'", "--expand", "4"]);
    assert!(out.lines().any(|l| l == "coefficients: 0,1,2,4,8"), "{out}");
    assert!(out.lines().any(|l| l == "ordered: false"), "{out}");
    let out = stdout(&[
        "series",
        "cfg",
        "--alphabet",
        "12",
        "--rules",
        "S -> | 1U2S | 2D1S; U -> | 1U2U; D -> | 2D1D",
        "--expand",
        "6",
    ]);
    assert_eq!(out, "coefficients: 1,0,2,0,6,0,20\n");
}

#[test]
fn dfa_file_subject() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    // a*b over {a, b}
    write!(
        f,
        r#"{{"alphabet":"ab","states":3,"transitions":[["a",0,0],["b",0,1],["a",1,2],["b",1,2],["a",2,2],["b",2,2]],"initial":0,"finals":[1]}}"#
    )
    .unwrap();
    let out = stdout(&["series", "dfa", "--file", f.path().to_str().unwrap(), "--expand", "3"]);
    assert_eq!(out, "series: t/(1-t)\ncoefficients: 0,1,1,1\n");
}

#[test]
fn groebner_examples() {
    let out = stdout(&["groebner", "--cat", "oi:1", "--n", "1", "--gens", "1*[01]-1*[10]", "--trunc", "6"]);
    assert!(out.lines().any(|l| l == "dims: 0,0,1,2,3,4,5"), "{out}");
    assert!(out.lines().any(|l| l == "initial: 10"), "{out}");
    let out = stdout(&["groebner", "--cat", "oi:1", "--n", "1", "--trunc", "3"]);
    assert!(out.lines().any(|l| l == "dims: 0,0,0,0"), "{out}");
    assert!(out.lines().any(|l| l == "series: 0"), "{out}");
    let out = stdout(&[
        "groebner",
        "--cat",
        "oi:1",
        "--n",
        "1",
        "--gens",
        "1*[01]-1*[10]",
        "--candidate",
        "1*[01]-1*[10]",
        "--trunc",
        "5",
    ]);
    assert!(out.lines().any(|l| l == "groebner: true"), "{out}");
}

#[test]
fn candidate_outside_module_is_named() {
    let out = lingual(&["groebner", "--cat", "oi:1", "--n", "1", "--gens", "[01]", "--candidate", "[10]", "--trunc", "4"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1*[10]"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["homcount", "zz", "1", "2"]), 2);
    assert_eq!(exit_code(&["series", "ideal", "--cat", "oi:1", "--n", "1", "--gens", "1x"]), 2);
    assert_eq!(exit_code(&["--max-work", "10", "series", "ideal", "--cat", "oi:1", "--n", "1", "--gens", "10"]), 3);
    assert_eq!(exit_code(&["series", "projective", "--cat", "oieq:1", "--n", "1"]), 4);
    assert_eq!(exit_code(&["series", "projective", "--cat", "oi:1", "--n", "1", "--egf"]), 0);
    assert_eq!(exit_code(&["series", "projective", "--cat", "oi:1*oi:1", "--n", "0,0", "--egf"]), 4);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "groebner", "--cat", "oi:2", "--n", "1", "--gens", "[01]-[02]", "--trunc", "4"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["category"], "oi:2");
    assert!(v["dims"].is_array());
    let args = ["--format", "json", "series", "projective", "--cat", "os", "--n", "2", "--expand", "4", "--egf"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn config_presets() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"ideals":{{"tail":{{"cat":"oi:1","n":[1],"gens":"10"}}}},"modules":{{"diff":{{"cat":"oi:1","n":[1],"gens":["1*[01]-1*[10]"]}}}}}}"#
    )
    .unwrap();
    let cfg = f.path().to_str().unwrap();
    let out = stdout(&["--config", cfg, "series", "ideal", "--use", "tail", "--expand", "4"]);
    assert!(out.lines().any(|l| l == "coefficients: 0,0,1,2,3"), "{out}");
    let out = stdout(&["--config", cfg, "groebner", "--use", "diff", "--trunc", "4"]);
    assert!(out.lines().any(|l| l == "dims: 0,0,1,2,3"), "{out}");
    assert_eq!(exit_code(&["--config", cfg, "series", "ideal", "--use", "nope"]), 2);
}
