use std::process::{Command, Output};

use tempfile::TempDir;

fn rewb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rewb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = rewb(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn source_sink(manifest: &str) -> (String, String) {
    let words: Vec<&str> = manifest.split_whitespace().collect();
    (words[1].to_owned(), words[4].to_owned())
}

#[test]
fn parse_prints_canonical_form() {
    assert_eq!(ok(&["parse", "a@x(b[x=]*)"]), "a@x(b[x=]*)\n");
}

#[test]
fn parse_error_has_position() {
    let o = rewb(&["parse", "a["]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:3"));
}

#[test]
fn automaton_dump_is_deterministic() {
    let first = ok(&["parse", "(a@x(b[x=]))*", "--dump-automaton"]);
    assert_eq!(first, ok(&["parse", "(a@x(b[x=]))*", "--dump-automaton"]));
    assert!(first.contains("0 -> 1 : a store x\n"));
}

#[test]
fn dump_automaton_needs_distinct_binders() {
    assert_eq!(rewb(&["parse", "a@x(b@x(c[x=]))", "--dump-automaton"]).status.code(), Some(1));
    let renamed = ok(&["parse", "a@x(b@x(c[x=]).c[x!=])", "--rename"]);
    assert_eq!(renamed, "a@x_1(b@x_2(c[x_2=]).c[x_1!=])\n");
}

#[test]
fn classify_levels() {
    assert!(ok(&["classify", "(a1@x1(b1[x1=]))*"]).starts_with("F-level: 1  E-level: 2  aut-size: "));
    assert!(ok(&["classify", "a"]).starts_with("F-level: 0  E-level: 1 "));
    let e = "a@x_po(a@x_ne((b.(pn[x_po=].pa[x_1=|x_2=]+pn[x_ne=].pa[x_1!=&x_2!=]).e)*))";
    assert!(ok(&["classify", e]).starts_with("F-level: 1  E-level: 1 "));
}

#[test]
fn membership() {
    assert_eq!(ok(&["member", "--expr", "a@x(b[x=]*)", "--word", "a:5 b:5 b:5"]), "true\n");
    assert_eq!(ok(&["member", "--expr", "eps", "--word", ""]), "true\n");
    assert_eq!(ok(&["member", "--expr", "(a@x(b[x=]))*", "--word", "a:1 b:1 a:2 b:2"]), "true\n");
    assert_eq!(rewb(&["member", "--expr", "a[x=]", "--word", "a:5"]).status.code(), Some(1));
    assert_eq!(ok(&["member", "--expr", "a[x=]", "--word", "a:5", "--any"]), "true\n");
    assert_eq!(ok(&["member", "--expr", "a[x=].b[x!=]", "--word", "a:5 b:5", "--any"]), "false\n");
    assert_eq!(ok(&["member", "--expr", "a[x=]", "--word", "a:5", "--val", "x=7"]), "false\n");
}

#[test]
fn expression_from_file() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "e.txt");
    std::fs::write(&f, "a@x(b[x=])\n").unwrap();
    assert_eq!(ok(&["member", "--expr", &format!("@{f}"), "--word", "a:1 b:1"]), "true\n");
}

#[test]
fn evaluation() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g");
    std::fs::write(&g, "edge u a 5 v\nedge v b 5 w\nedge v b 7 w2\n").unwrap();
    for engine in ["flat", "stratified", "oracle"] {
        assert_eq!(ok(&["eval", "--expr", "a@x(b[x=])", "--graph", &g, "--engine", engine]), "u w\n");
    }
    assert_eq!(ok(&["eval", "--expr", "a[x=]", "--graph", &g, "--val", "x=7"]), "");
    assert_eq!(ok(&["eval", "--expr", "a[x!=]", "--graph", &g, "--any"]), "u v\n");
    assert_eq!(ok(&["eval", "--expr", "a", "--graph", &g, "--from", "u", "--to", "v"]), "true\n");
    assert_eq!(ok(&["eval", "--expr", "a", "--graph", &g, "--from", "u", "--to", "v", "--witness"]), "u a 5 v\n");
    assert_eq!(ok(&["eval", "--expr", "a", "--graph", &g, "--from", "v", "--to", "u", "--witness"]), "none\n");
    assert_eq!(ok(&["eval", "--expr", "a", "--graph", &g, "--engine", "oracle", "--max-len", "1"]), "u v\n");
    assert_eq!(rewb(&["eval", "--expr", "a", "--graph", &g, "--from", "zz", "--to", "u"]).status.code(), Some(1));
    assert_eq!(rewb(&["eval", "--expr", "a", "--graph", &g, "--max-len", "3"]).status.code(), Some(2));
}

#[test]
fn witness_families() {
    assert_eq!(ok(&["witness", "--family", "r", "--i", "1"]), "(a1@x1(b1[x1=]))*\n");
    assert_eq!(ok(&["witness", "--family", "r", "--i", "2"]), "(a2@x2((a1@x1(b1[x1=]))*.b2[x2=]))*\n");
    let u = ok(&["witness", "--family", "u", "--i", "1", "--n", "2"]);
    assert_eq!(u.split_whitespace().count(), 8);
    let m = ok(&["witness", "--family", "mismatch", "--i", "1", "--n", "2", "--count", "3", "--seed", "4"]);
    assert_eq!(m.lines().count(), 3);
    assert_eq!(rewb(&["witness", "--family", "r", "--i", "0"]).status.code(), Some(1));
}

#[test]
fn sat_gadget_is_connected() {
    let dir = TempDir::new().unwrap();
    let (g, e) = (path(&dir, "g"), path(&dir, "e"));
    let manifest = ok(&["gadget", "sat", "--formula", "pr1 & !pr2", "--atoms", "pr1,pr2", "--out-graph", &g, "--out-expr", &e]);
    let (s, t) = source_sink(&manifest);
    let e_arg = format!("@{e}");
    assert_eq!(ok(&["eval", "--expr", &e_arg, "--graph", &g, "--from", &s, "--to", &t]), "true\n");
    let (s, t) = source_sink(&ok(&["gadget", "sat", "--formula", "pr1 & !pr1", "--atoms", "pr1", "--out-graph", &g, "--out-expr", &e]));
    assert_eq!(ok(&["eval", "--expr", &e_arg, "--graph", &g, "--from", &s, "--to", &t]), "false\n");
}

#[test]
fn wqsat_gadget_is_connected() {
    let dir = TempDir::new().unwrap();
    let (g, e) = (path(&dir, "g"), path(&dir, "e"));
    let manifest = ok(&[
        "gadget", "wqsat", "--blocks", "E1:pr1,pr2;A1:pr3,pr4", "--formula", "pr1 & (pr3|pr4)", "--out-graph", &g, "--out-expr", &e,
    ]);
    let (s, t) = source_sink(&manifest);
    assert_eq!(ok(&["eval", "--expr", &format!("@{e}"), "--graph", &g, "--from", &s, "--to", &t]), "true\n");
}

#[test]
fn formula_and_composition_gadgets() {
    let dir = TempDir::new().unwrap();
    let (g, e, g2, e2) = (path(&dir, "g"), path(&dir, "e"), path(&dir, "g2"), path(&dir, "e2"));
    let manifest = ok(&["gadget", "formula", "--formula", "pr1 | pr2", "--atoms", "pr1,pr2", "--k", "1", "--out-graph", &g, "--out-expr", &e]);
    assert!(manifest.ends_with("free-vars x_1\n"));
    let manifest = ok(&[
        "gadget", "forall", "--k", "1", "--atoms", "pr1,pr2", "--graph", &g, "--expr", &format!("@{e}"), "--out-graph", &g2,
        "--out-expr", &e2,
    ]);
    let (s, t) = source_sink(&manifest);
    assert_eq!(ok(&["eval", "--expr", &format!("@{e2}"), "--graph", &g2, "--from", &s, "--to", &t]), "true\n");
    let manifest = ok(&[
        "gadget", "exists", "--k", "1", "--atoms", "pr1,pr2", "--graph", &g, "--expr", &format!("@{e}"), "--out-graph", &g2,
        "--out-expr", &e2,
    ]);
    let (s, t) = source_sink(&manifest);
    assert_eq!(ok(&["eval", "--expr", &format!("@{e2}"), "--graph", &g2, "--from", &s, "--to", &t]), "true\n");
    let clash = rewb(&[
        "gadget", "exists", "--k", "1", "--atoms", "pr1", "--graph", &g, "--expr", "a1", "--out-graph", &g2, "--out-expr", &e2,
    ]);
    assert_eq!(clash.status.code(), Some(1));
}

#[test]
fn pcp_gadgets() {
    let dir = TempDir::new().unwrap();
    let d = path(&dir, "delta");
    let manifest = ok(&["gadget", "pcp-delta", "--pairs", "ab/a,c/bc", "--i", "1", "--out-expr", &d]);
    assert!(manifest.contains("E-level: 2"));
    let w = ok(&["gadget", "pcp-encode", "--pairs", "ab/a,c/bc", "--seq", "1,2", "--i", "1"]);
    let d_arg = format!("@{d}");
    assert_eq!(ok(&["member", "--expr", &d_arg, "--word", w.trim(), "--any"]), "false\n");
    let bad = ok(&["gadget", "pcp-encode", "--pairs", "ab/a,c/bc", "--seq", "1,2", "--i", "1", "--mutate", "position-value-mismatch"]);
    assert_eq!(ok(&["member", "--expr", &d_arg, "--word", bad.trim(), "--any"]), "true\n");
    assert_eq!(rewb(&["gadget", "pcp-encode", "--pairs", "ab/a,c/bc", "--seq", "2,1", "--i", "1"]).status.code(), Some(1));
    ok(&["gadget", "pcp-encode", "--pairs", "ab/a,c/bc", "--seq", "2,1", "--i", "1", "--allow-non-solution"]);
}

#[test]
fn selftest_reports_cases() {
    assert_eq!(ok(&["selftest", "--cases", "25", "--seed", "3"]), "OK: 25 cases\n");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(rewb(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rewb(&["member", "--expr", "a"]).status.code(), Some(2));
}
