use std::path::PathBuf;
use std::process::{Command, Output};

use codim_one::session::{render_report, Format, Report};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codim-one"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn guard() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/guard.cod").to_string()
}

#[test]
fn bundled_session_replay_succeeds() {
    let o = bin(&["paper", "ex1_1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("=> supht(a) = 2, D(a) NOT AFFINE"));
}

#[test]
fn unknown_example_lists_ids() {
    let o = bin(&["paper", "ex9_9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cone_a1_ruling"));
}

#[test]
fn inconsistency_exits_3() {
    let o = bin(&["run", &guard()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("witness `w`"));
    assert!(stdout(&o).contains("certificate `c`"));
}

#[test]
fn syntax_error_exits_1_with_location() {
    let p = write("bad.cod", "ring P = QQ[R, T]\nalgebra A = P / () domain\nideal a in A = (R,,T)\n");
    let o = bin(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("3:19: syntax error"), "{}", stderr(&o));
    let o = bin(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_only_resolves() {
    let o = bin(&["check", &guard()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 tasks"));
}

#[test]
fn missing_file_exits_1() {
    assert_eq!(bin(&["run", "/nonexistent/x.cod"]).status.code(), Some(1));
}

#[test]
fn flag_errors_exit_1() {
    assert_eq!(bin(&["paper", "ex1_1", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(bin(&["paper", "ex1_1", "--field", "fp:8"]).status.code(), Some(1));
    assert_eq!(bin(&["paper", "ex1_1", "--field", "r"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_verdict_exits_2() {
    let text = include_str!("../paper/ex3_1_k1.cod").replace("task ledger a using c", "task ledger a");
    let p = write("open.cod", &text);
    assert_eq!(bin(&["run", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn resource_cap_exits_4() {
    let o = bin(&["paper", "ex3_1_k2", "--max-spairs", "0"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn prefilter_does_not_change_the_report() {
    let a = bin(&["paper", "ex3_2_k2"]);
    let b = bin(&["paper", "ex3_2_k2", "--field", "fp:32003"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.status.code(), Some(0));
}

#[test]
fn runs_are_byte_identical() {
    for id in ["ex1_1", "ex3_1_k3", "cone_a1_vertex", "ex6_1"] {
        let a = bin(&["paper", id, "--format", "json-lines"]);
        let b = bin(&["paper", id, "--format", "json-lines"]);
        assert_eq!(a.stdout, b.stdout, "{id}");
    }
}

#[test]
fn renderings_carry_identical_content() {
    for id in ["ex1_1", "ex3_1_k1", "cone_a1_ruling", "ex5_1"] {
        let json = stdout(&bin(&["paper", id, "--format", "json-lines"]));
        let text = stdout(&bin(&["paper", id]));
        let r = Report::from_json_lines(&json).unwrap();
        assert_eq!(render_report(&r, Format::Text), text, "{id}");
    }
}

#[test]
fn verbose_prints_statistics() {
    let o = bin(&["paper", "ex3_1_k1", "--verbose", "--field", "fp:101"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("  stats: "));
}
