use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value as Json;

fn run(args: &[&str]) -> (i32, Json) {
    let out = Command::new(env!("CARGO_BIN_EXE_semiteam"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), json)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semiteam-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_atom_verdicts_and_exit_codes() {
    let (code, j) = run(&[
        "check-atom",
        "--example",
        "probabilistic",
        "--atom",
        "indep(;x;y)",
    ]);
    assert_eq!((code, &j["satisfied"]), (0, &Json::Bool(true)));

    let (code, j) = run(&[
        "check-atom",
        "--example",
        "zmod4-mixing",
        "--atom",
        "indep(;x;y,z)",
    ]);
    assert_eq!((code, &j["value"]), (1, &Json::from("0")));

    let (code, j) = run(&["check-atom", "--example", "multiteam", "--atom", "dep(x;y)"]);
    assert_eq!(code, 0);
    assert_eq!(j["value"], "4");
    assert_eq!(j["zero_divisor_anomaly"], false);

    let (code, j) = run(&["check-atom", "--example", "multiteam", "--atom", "dep(x;"]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["code"], "SyntaxError");
}

#[test]
fn literal_atoms_need_the_structure() {
    let st = scratch("lit.str", "universe: a b\nrel S/1: a\n");
    let team = scratch("lit.csv", "x,weight\na,3\n");
    let (code, j) = run(&[
        "check-atom",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--atom",
        "S(x)",
    ]);
    assert_eq!((code, &j["value"]), (0, &Json::from("1")));
    let (code, _) = run(&[
        "check-atom",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--atom",
        "!S(x)",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn eval_sentences() {
    let sentence = "forall u,v. (exists y. R(u,y)) & (exists x. R(x,v)) = (exists x,y. R(x,y)) & R(u,v)";
    let (code, j) = run(&["eval", "--example", "team", "--sentence", sentence]);
    assert_eq!((code, &j["value"]), (0, &Json::from("1")));

    let st = scratch("eval.str", "universe: a b\nrel S/1: a\n");
    let (_, j) = run(&["eval", "--structure", s(&st), "--sentence", "exists x. S(x)"]);
    assert_eq!(j["value"], "1");

    let (code, j) = run(&[
        "eval",
        "--structure",
        s(&st),
        "--semiring",
        "zmod:4",
        "--sentence",
        "(exists x. S(x)) <= (exists x. S(x))",
    ]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["code"], "NotOrdered");

    let int = scratch(
        "eval.int",
        "semiring: nat\nuniverse: a b\nrel S/1: a | b\nlit S(a) = 2\nlit S(b) = 3\n",
    );
    let (_, j) = run(&[
        "eval",
        "--interpretation",
        s(&int),
        "--sentence",
        "exists x. S(x)",
    ]);
    assert_eq!(j["value"], "5");
}

#[test]
fn teamcheck_trace_and_incomplete_search() {
    let st = scratch("tc.str", "universe: a b\nrel S/1: a\n");
    let team = scratch("tc.csv", "x,weight\na,2\nb,5\n");
    let trace = std::env::temp_dir().join(format!("semiteam-trace-{}.json", std::process::id()));
    let (code, j) = run(&[
        "teamcheck",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--formula",
        "S(x) | !S(x)",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(j["verdict"], true);
    let written: Json = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(written, j["trace"]);
    assert_eq!(written["node"], "or");

    let (code, j) = run(&[
        "teamcheck",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--formula",
        "S(x) | S(x)",
    ]);
    assert_eq!((code, &j["complete"]), (1, &Json::Bool(true)));

    let (code, j) = run(&[
        "teamcheck",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--semiring",
        "rat",
        "--formula",
        "S(x) | S(x)",
        "--strategy",
        "denom:3",
    ]);
    assert_eq!((code, &j["complete"]), (3, &Json::Bool(false)));

    let (code, j) = run(&[
        "teamcheck",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--semiring",
        "rat",
        "--formula",
        "S(x) | S(x)",
    ]);
    assert_eq!((code, &j["error"]["code"]), (2, &Json::from("InfiniteSearch")));
}

#[test]
fn polynomial_outputs() {
    let st = scratch("poly.str", "universe: a b\nrel S/1: a\n");
    let team = scratch("poly.csv", "x,weight\na,2\nb,5\n");
    let args = |emit: &'static str| {
        vec![
            "poly",
            "--structure",
            s(&st),
            "--team",
            s(&team),
            "--formula",
            "S(x) | !S(x)",
            "--emit",
            emit,
        ]
    };
    let (code, ir) = run(&args("ir"));
    assert_eq!(code, 0);
    assert!(ir["polynomial"].as_str().unwrap().starts_with("(*"));
    assert_eq!(ir["families"].as_array().unwrap().len(), 3);

    let out = std::env::temp_dir().join(format!("semiteam-{}.smt2", std::process::id()));
    let mut smt = args("smt2");
    smt.extend(["--out", out.to_str().unwrap()]);
    let (_, first) = run(&smt);
    let raw = fs::read_to_string(&out).unwrap();
    assert_eq!(first["smt2"], raw.as_str());
    assert!(raw.starts_with("(set-logic QF_LIA)"));
    assert!(raw.trim_end().ends_with("(check-sat)"));
    let (_, second) = run(&smt);
    assert_eq!(first, second);

    let (code, count) = run(&args("count"));
    assert_eq!(code, 0);
    assert_eq!(count["witnesses"], "1");
}

#[test]
fn provenance_specialises_back_to_weights() {
    let st = scratch("prov.str", "universe: a b\nrel S/1: a | b\n");
    let team = scratch("prov.csv", "x,weight\na,2\nb,5\n");
    let base = [
        "provenance",
        "--structure",
        s(&st),
        "--team",
        s(&team),
        "--formula",
        "S(x)",
    ];
    let (code, j) = run(&base);
    assert_eq!(code, 0);
    assert_eq!(j["polynomials"][0]["polynomial"], "p1*p2");
    assert_eq!(j["tokens"][1]["assignment"]["x"], "b");

    let mut spec = base.to_vec();
    spec.extend(["--emit", "specialized"]);
    let (_, j) = run(&spec);
    assert_eq!(j["polynomials"][0]["value"], "10");
    spec.extend(["--bind", "p1=1,p2=1"]);
    let (_, j) = run(&spec);
    assert_eq!(j["polynomials"][0]["value"], "1");
}

#[test]
fn repairs() {
    let (code, j) = run(&[
        "repair",
        "--example",
        "team",
        "--constraints",
        "dep(x;y)",
        "--notion",
        "sym",
    ]);
    assert_eq!(code, 0);
    assert_eq!(j["distance"], "1");
    assert_eq!(j["repairs"].as_array().unwrap().len(), 2);
    assert!(j["reading"].is_string());

    let team = scratch("rep.csv", "x,y,weight\na,b,1\n");
    let (_, j) = run(&[
        "repair",
        "--team",
        s(&team),
        "--semiring",
        "nat",
        "--constraints",
        "inc(x;y)",
        "--notion",
        "super",
        "--weights",
        "0,1",
    ]);
    assert_eq!(j["repairs"].as_array().unwrap().len(), 1);
    assert_eq!(j["distance"], "1");

    let (code, j) = run(&["repair", "--example", "team", "--weights", "1"]);
    assert_eq!((code, &j["error"]["code"]), (2, &Json::from("InputError")));
}

#[test]
fn probe_suites() {
    let (code, j) = run(&["paper-suite"]);
    assert_eq!(code, 0);
    assert_eq!(j["passed"], true);

    let args = [
        "axioms",
        "--semiring",
        "zmod:4",
        "--samples",
        "100",
        "--mixing-samples",
        "60",
        "--seed",
        "9",
    ];
    let (code, j) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(j["mixing"][0]["bundled_counterexample"], true);
    assert_eq!(run(&args).1, j);

    let (code, j) = run(&[
        "axioms",
        "--semiring",
        "rat",
        "--samples",
        "100",
        "--mixing-samples",
        "100",
    ]);
    assert_eq!(code, 0);
    assert_eq!(j["mixing"][0]["violations"], 0);
}

#[test]
fn unreadable_input_is_an_error() {
    let (code, j) = run(&[
        "check-atom",
        "--team",
        "/nonexistent/team.csv",
        "--atom",
        "dep(x;y)",
    ]);
    assert_eq!((code, &j["error"]["code"]), (2, &Json::from("IoError")));
}
