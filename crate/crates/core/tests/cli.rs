use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use inversia::cert::{CertKind, Certificate};
use inversia::graph::parse_graph;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inversia"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inversia-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_graph(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let c5 = write_graph("c5.graph", "p 5 5\ne 0 1 1\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 0 4 1\n");
    assert_eq!(code(&["solve", s(&c5), "--t", "2"]), 0);
    let tri = write_graph("tri.graph", "p 3 3\ne 0 1 1\ne 1 2 1\ne 0 2 0\n");
    assert_eq!(code(&["solve", s(&tri), "--t", "1"]), 1);
    assert_eq!(code(&["solve", s(&c5), "--t", "2", "--budget-nodes", "0"]), 2);
    assert_eq!(code(&["solve", "/nonexistent/file.graph", "--t", "2"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(code(&["solve", s(&c5)]), 3);
    let bad = write_graph("bad.graph", "p 2 1\ne 0 5 1\n");
    assert_eq!(code(&["parse", s(&bad)]), 3);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn norm_and_girth() {
    let sp5 = write_graph("sp5.graph", &String::from_utf8(run(&["target", "paley", "5"]).stdout).unwrap());
    let out = run(&["--format", "json", "norm", s(&sp5)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["norm"], 3);
    let out = run(&["girth", s(&sp5)]);
    assert!(String::from_utf8(out.stdout).unwrap().contains('3'));
}

#[test]
fn certificate_round_trip() {
    let g4 = write_graph("g4.graph", &String::from_utf8(run(&["gadget", "girth4_lb"]).stdout).unwrap());
    let graph = parse_graph(&std::fs::read_to_string(&g4).unwrap()).unwrap();

    let sat = scratch("sat.json");
    assert_eq!(code(&["solve", s(&g4), "--t", "4", "--cert", s(&sat)]), 0);
    let c = Certificate::read(&sat).unwrap();
    assert_eq!(c.kind, CertKind::Assignment);
    c.check(&graph).unwrap();

    let unsat = scratch("unsat.json");
    assert_eq!(code(&["solve", s(&g4), "--t", "3", "--cert", s(&unsat)]), 1);
    let c = Certificate::read(&unsat).unwrap();
    assert_eq!((c.kind, c.exhaustive), (CertKind::Unsat, true));
    c.check(&graph).unwrap();
}

#[test]
fn suite_selection() {
    let report = scratch("report.json");
    let out = run(&["suite", "--select", "figures", "--cert", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v.to_string().contains("g4_parity"));
    assert_eq!(code(&["suite", "--select", "g3_lemma", "--budget-nodes", "0"]), 2);
    assert_eq!(code(&["suite", "--select", "no_such_check"]), 3);
}
