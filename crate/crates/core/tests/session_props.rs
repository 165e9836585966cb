mod common;

use codim_one::certify::tags;
use codim_one::error::Error;
use codim_one::groebner::GbConfig;
use codim_one::session::paper::paper_session;
use codim_one::session::{
    parse_session, render_report, render_session, resolve, run_session, Format, Report,
    RunOptions, Status,
};
use common::corpus;

fn run(text: &str) -> Report {
    let s = parse_session(text).unwrap();
    let r = resolve(&s, &GbConfig::default()).unwrap();
    run_session(&r, &RunOptions::default())
}

#[test]
fn parser_survives_mutations() {
    let bad = common::fuzz_suite(20_000, 0xF022);
    assert!(bad.is_empty(), "{:#?}", &bad[..bad.len().min(10)]);
}

#[test]
fn golden_sessions_round_trip() {
    for (id, text) in corpus() {
        let s = parse_session(&text).unwrap();
        let again = parse_session(&render_session(&s)).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(s, again, "{id}");
    }
}

#[test]
fn empty_session() {
    let s = parse_session("").unwrap();
    assert!(s.items.is_empty());
    let r = run("# nothing here\n");
    assert!(r.results.is_empty());
    assert_eq!(render_report(&r, Format::Text), "");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn double_comma_is_located() {
    let text = "ring P = QQ[R, T]\nalgebra A = P / () domain\nideal a in A = (R,,T)\n";
    match parse_session(text) {
        Err(Error::Parse { line: 3, col: 19, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn reference_errors() {
    let dup = "ring P = QQ[x]\nring P = QQ[y]\n";
    assert!(matches!(resolve(&parse_session(dup).unwrap(), &GbConfig::default()), Err(Error::Resolve { line: 2, .. })));
    let missing = "ring P = QQ[x]\nideal a in A = (x)\n";
    assert!(matches!(resolve(&parse_session(missing).unwrap(), &GbConfig::default()), Err(Error::Resolve { line: 2, .. })));
}

#[test]
fn reports_are_deterministic() {
    for (id, text) in corpus() {
        let a = render_report(&run(&text), Format::JsonLines);
        let b = render_report(&run(&text), Format::JsonLines);
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn json_lines_carry_the_text_report() {
    for (id, text) in corpus() {
        let r = run(&text);
        let json = render_report(&r, Format::JsonLines);
        let back = Report::from_json_lines(&json).unwrap();
        assert_eq!(back, r, "{id}");
        assert_eq!(render_report(&back, Format::Text), render_report(&r, Format::Text));
    }
}

#[test]
fn ex1_1_text_cites_the_generator_bound() {
    let text = render_report(&run(paper_session("ex1_1").unwrap()), Format::Text);
    assert!(text.contains(&format!("upper bound: 2 from 2 generators  {}", tags::ARA)), "{text}");
    assert!(text.contains("=> supht(a) = 2, D(a) NOT AFFINE"));
    assert!(text.contains("assumed: A: domain"));
}

#[test]
fn consistency_guard_names_both_sources() {
    let r = run(include_str!("data/guard.cod"));
    assert_eq!(r.results[0].status, Status::Inconsistent);
    assert_eq!(r.exit_code(), 3);
    let s = &r.results[0].summary;
    assert!(s.contains("`w`") && s.contains("`c`"), "{s}");
}

#[test]
fn broken_certificate_is_reported() {
    let text = paper_session("ex3_1_k1").unwrap().replace("(-Y1, X2)", "(Y1, X2)");
    let r = run(&text);
    assert_eq!(r.results[0].status, Status::InputError);
    assert!(r.results[0].facts.iter().any(|f| f.key == "certificate c failure"));
}

#[test]
fn missing_evidence_leaves_the_verdict_open() {
    let text = paper_session("ex3_1_k1").unwrap().replace("task ledger a using c", "task ledger a");
    let r = run(&text);
    assert_eq!(r.results[0].status, Status::Unknown);
    assert_eq!(r.results[0].summary, "supht(a) in [1, 2], D(a) UNKNOWN");
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn resource_cap_is_an_outcome() {
    let s = parse_session(paper_session("ex1_1").unwrap()).unwrap();
    let r = resolve(&s, &GbConfig::default()).unwrap();
    let opts = RunOptions {
        cfg: GbConfig { max_spairs: 0, ..GbConfig::default() },
        verbose: false,
    };
    let rep = run_session(&r, &opts);
    assert_eq!(rep.results[0].status, Status::ResourceCap);
    assert_eq!(rep.exit_code(), 4);
}

#[test]
fn verbose_adds_statistics() {
    let s = parse_session(paper_session("ex3_1_k1").unwrap()).unwrap();
    let r = resolve(&s, &GbConfig::default()).unwrap();
    let opts = RunOptions { cfg: GbConfig { prefilter: Some(32003), ..GbConfig::default() }, verbose: true };
    let rep = run_session(&r, &opts);
    let st = rep.results[0].stats.as_ref().unwrap();
    assert!(st.bases > 0);
    assert_eq!(st.prefilter_disagree, 0);
    assert!(render_report(&rep, Format::Text).contains("  stats: "));
}
