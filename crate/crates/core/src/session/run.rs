//! Task execution.

use std::sync::Arc;
use std::time::Instant;

use super::ast::{Located, TaskKind};
use super::report::{Report, Stats, Status, TaskResult};
use super::resolve::{Entity, Resolved};
use crate::algebra::{algebra_dimension, IdealInAlgebra, PresentedAlgebra};
use crate::certify::{
    affine_via_purity, ledger_combine, tags, verify_affine_certificate, verify_witness, Evidence,
    SuperheightLedger, Verdict,
};
use crate::error::{Error, Result};
use crate::groebner::GbConfig;
use crate::monoid::{monoid_affine, ToricPresentation};
use crate::surface::{check_criterion, VERDICT_NONE};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub cfg: GbConfig,
    /// Adds timing and Groebner statistics to every task result.
    pub verbose: bool,
}

/// Runs every task in file order.
pub fn run_session(s: &Resolved, opts: &RunOptions) -> Report {
    Report {
        results: s.tasks.iter().map(|t| run_task(s, t, opts)).collect(),
    }
}

pub fn run_task(s: &Resolved, task: &Located<TaskKind>, opts: &RunOptions) -> TaskResult {
    let mut out = TaskResult::new(task.node.label());
    let before = opts.cfg.stats.snapshot();
    let start = Instant::now();
    let res = match &task.node {
        TaskKind::Ledger {
            ideal,
            evidence,
            sections_finitely_generated,
        } => {
            let names: Vec<&str> = evidence.iter().map(|e| e.node.as_str()).collect();
            ledger_task(
                s,
                &ideal.node,
                &names,
                *sections_finitely_generated,
                &opts.cfg,
                &mut out,
            )
        }
        TaskKind::MonoidAffine { ideal, embedding } => {
            ledger_task(s, &ideal.node, &[&embedding.node], false, &opts.cfg, &mut out)
        }
        TaskKind::Purity {
            ideal,
            normalization,
        } => ledger_task(s, &ideal.node, &[&normalization.node], false, &opts.cfg, &mut out),
        TaskKind::Surface { config } => surface_task(s, &config.node, &mut out),
    };
    if let Err(e) = res {
        out.status = match e {
            Error::InconsistentEvidence(_) => Status::Inconsistent,
            Error::ComputationTooLarge { .. } => Status::ResourceCap,
            _ => Status::InputError,
        };
        out.summary = e.to_string();
    }
    if opts.verbose {
        let after = opts.cfg.stats.snapshot();
        out.stats = Some(Stats {
            micros: start.elapsed().as_micros() as u64,
            bases: after.bases - before.bases,
            spairs: after.spairs - before.spairs,
            prefilter_agree: after.prefilter_agree - before.prefilter_agree,
            prefilter_disagree: after.prefilter_disagree - before.prefilter_disagree,
            prefilter_skipped: after.prefilter_skipped - before.prefilter_skipped,
        });
    }
    out
}

fn assert_algebra(out: &mut TaskResult, a: &PresentedAlgebra) {
    let f = a.flags();
    let mut words = Vec::new();
    if f.domain {
        words.push("domain");
    }
    if f.factorial {
        words.push("factorial");
    }
    if !words.is_empty() {
        out.assert(format!("{}: {}", a.name(), words.join(", ")));
    }
}

fn toric_of<'a>(s: &'a Resolved, algebra: &Arc<PresentedAlgebra>) -> Option<&'a ToricPresentation> {
    match s.get(algebra.name()) {
        Some(Entity::Monoid(t)) if Arc::ptr_eq(&t.algebra, algebra) => Some(t),
        _ => None,
    }
}

fn ledger_task(
    s: &Resolved,
    ideal_name: &str,
    evidence: &[&str],
    sections_fg: bool,
    cfg: &GbConfig,
    out: &mut TaskResult,
) -> Result<()> {
    let a = s.ideal(ideal_name);
    let algebra = a.algebra().clone();
    out.fact("algebra", format!("{} = {}", algebra.name(), algebra));
    out.fact("ideal", format!("{ideal_name} = {a}"));
    out.fact(
        format!("dim {}", algebra.name()),
        algebra_dimension(&algebra, cfg)?,
    );
    assert_algebra(out, &algebra);
    if let Some(t) = toric_of(s, &algebra) {
        if t.monoid.positive {
            out.assert(format!("{}: positive", t.monoid.name));
        }
        if t.monoid.normal {
            out.assert(format!("{}: normal", t.monoid.name));
        }
    }
    if sections_fg {
        out.assert("sections-finitely-generated");
    }

    let mut verified = Vec::new();
    for name in evidence {
        let e = match s.get(name) {
            Some(Entity::Witness(w)) => {
                assert_algebra(out, w.map.target());
                let o = verify_witness(&algebra, a, w, cfg)?;
                out.tagged(
                    format!("witness {name}"),
                    format!(
                        "{}: {} -> {}, extended ideal {}, height {}",
                        w.map.name(),
                        algebra.name(),
                        w.map.target().name(),
                        o.extended,
                        o.height
                    ),
                    tags::WITNESS,
                );
                Evidence::Witness(o)
            }
            Some(Entity::Certificate { cert, .. }) => {
                let check = verify_affine_certificate(&algebra, a, cert, cfg)?;
                let part = |failed: bool| if failed { "FAIL" } else { "pass" };
                out.tagged(
                    format!("certificate {name}"),
                    format!(
                        "cover {}, compatibility {}, unity {}",
                        part(check.has_cover_failure()),
                        part(check.has_compatibility_failure()),
                        part(check.has_unity_failure())
                    ),
                    tags::UNITY,
                );
                if !check.passed() {
                    for f in &check.failures {
                        out.fact(format!("certificate {name} failure"), f);
                    }
                    return Err(Error::CertificateRejected(format!(
                        "`{name}`: {} check(s) failed",
                        check.failures.len()
                    )));
                }
                Evidence::Certificate(check)
            }
            Some(Entity::Embedding { monoid, embedding }) => {
                let Some(t) = toric_of(s, &algebra).filter(|t| t.monoid.name == *monoid) else {
                    return Err(Error::SourceMismatch(format!(
                        "embedding `{name}` is for `{monoid}`, ideal lives in `{}`",
                        algebra.name()
                    )));
                };
                if embedding.intersection_property {
                    out.assert(format!("{name}: intersection-property"));
                }
                let o = monoid_affine(t, embedding, a, cfg)?;
                out.fact(
                    format!("embedding {name}"),
                    format!("{} into Z^{} x N^{}", fmt_tuples(&embedding.images), embedding.s, embedding.k),
                );
                out.fact("extension aB", &o.extended);
                out.tagged(
                    "bight(aB) <= 1",
                    if o.bight_leq_one {
                        "yes, hence supht^fin <= 1"
                    } else {
                        "no"
                    },
                    tags::MONOID,
                );
                Evidence::Monoid {
                    name: name.to_string(),
                    verdict: o.verdict,
                }
            }
            Some(Entity::Map(nor)) => {
                assert_algebra(out, nor.target());
                let o = affine_via_purity(&algebra, nor, a, cfg)?;
                out.tagged(
                    format!("normalization {name}"),
                    format!("extended ideal {}, verdict {}", o.extended, o.verdict),
                    tags::PURITY,
                );
                Evidence::Purity(o)
            }
            _ => unreachable!("evidence kinds are checked during resolution"),
        };
        verified.push(e);
    }

    let ledger = ledger_combine(&algebra, a, &verified, sections_fg, cfg)?;
    write_ledger(out, ideal_name, &algebra, a, &ledger);
    Ok(())
}

fn fmt_tuples(v: &[Vec<i64>]) -> String {
    let t: Vec<String> = v
        .iter()
        .map(|g| {
            let c: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            format!("({})", c.join(", "))
        })
        .collect();
    format!("{{{}}}", t.join(", "))
}

fn write_ledger(
    out: &mut TaskResult,
    ideal_name: &str,
    algebra: &PresentedAlgebra,
    a: &IdealInAlgebra,
    l: &SuperheightLedger,
) {
    match l.height {
        Some(h) => out.tagged(format!("ht({ideal_name})"), h, tags::HEIGHT),
        None => out.fact(
            format!("ht({ideal_name})"),
            format!("not computed: `{}` is not asserted a domain", algebra.name()),
        ),
    }
    out.fact("generators", a.gens().len());
    out.tagged(
        "lower bound",
        format!("{} from {}", l.lower.value, l.lower.source),
        &l.lower.tag,
    );
    out.tagged(
        "upper bound",
        format!("{} from {}", l.upper.value, l.upper.source),
        &l.upper.tag,
    );
    out.tagged(
        "interval",
        format!("[{}, {}]", l.lower.value, l.upper.value),
        tags::OVER_FIELD,
    );
    for r in &l.reasons {
        out.tagged("reason", format!("{} by {}", r.verdict, r.source), &r.tag);
    }
    for n in &l.notes {
        out.fact("note", n);
    }
    out.fact("verdict", l.verdict);
    let bound = if l.is_exact() {
        format!("supht({ideal_name}) = {}", l.lower.value)
    } else {
        format!(
            "supht({ideal_name}) in [{}, {}]",
            l.lower.value, l.upper.value
        )
    };
    out.summary = format!("{bound}, D({ideal_name}) {}", l.verdict);
    if l.verdict == Verdict::Unknown {
        out.status = Status::Unknown;
    }
}

fn surface_task(s: &Resolved, name: &str, out: &mut TaskResult) -> Result<()> {
    let Some(Entity::Config(cfg)) = s.get(name) else {
        unreachable!("checked during resolution")
    };
    let r = check_criterion(cfg)?;
    if cfg.components_effective {
        out.assert("components effective");
    }
    if cfg.components_irreducible {
        out.assert("components irreducible");
    }
    if cfg.tests_effective {
        out.assert("test curves effective");
    }
    for a in &cfg.assumptions {
        out.assert(a.clone());
    }
    out.fact("lattice", format!("{} (rank {})", cfg.lattice.name, cfg.lattice.rank()));
    out.fact("divisor H, supp H = Y", &r.h_class);
    for p in &r.component_pairings {
        out.fact(format!("H.{}", p.curve), p.value);
    }
    out.fact(
        "H.Y_i >= 0",
        if r.components_nonnegative { "pass" } else { "FAIL" },
    );
    for p in &r.test_pairings {
        out.fact(format!("H.{}", p.curve), p.value);
    }
    out.fact(
        "H.C > 0 on test curves",
        match (r.test_pairings.is_empty(), r.tests_positive) {
            (true, _) => "not established (no test curves)",
            (false, true) => "pass",
            (false, false) => "FAIL",
        },
    );
    out.fact("Y^2", r.y_squared);
    out.fact("connected", if r.connected { "yes" } else { "no" });
    out.fact(
        "ample divisor on Y",
        if r.ample_obstruction {
            "impossible (irreducible with Y^2 = 0, or disconnected)"
        } else {
            "not excluded"
        },
    );
    out.fact("verdict", &r.verdict);
    out.summary = r.verdict.clone();
    if r.verdict == VERDICT_NONE {
        out.status = Status::Unknown;
    }
    Ok(())
}
