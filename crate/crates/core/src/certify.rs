//! Evidence about `U = D(a)` and the ledger that combines it into a
//! superheight interval and an affineness verdict.
//!
//! Two kinds of evidence are verified here: height witnesses (a map under
//! which the extended ideal has height at least two, so `U` is not affine)
//! and unity-partition certificates (sections `q_i` on `U` with
//! `1 = sum q_i f_i`, so `U` is affine). Verdicts from the two-dimensional
//! purity test and from the monoid route enter the ledger as well.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    algebra_dimension, bight_leq_one, extend_ideal, ideal_height, AlgebraMap,
    IdealInAlgebra, PresentedAlgebra,
};
use crate::error::{Error, Result};
use crate::groebner::{ideal_member, radical_member, saturate, GbConfig};
use crate::polycore::Polynomial;

/// Citation tags attached to bounds and verdicts.
pub mod tags {
    pub const HEIGHT: &str = "[height: dim A - dim A/a]";
    pub const ARA: &str = "[ara: generator count bounds superheight]";
    pub const DIMENSION: &str = "[dimension: supht <= dim + 1]";
    pub const WITNESS: &str = "[witness: extended-ideal height]";
    pub const OVER_FIELD: &str = "[finite-type witnesses suffice over a field]";
    pub const UNITY: &str = "[unity-partition: affine iff supht^krull <= 1]";
    pub const CODIM: &str = "[affine complement has codimension <= 1]";
    pub const PRINCIPAL: &str = "[principal: D(f) = Spec A_f]";
    pub const UNIT: &str = "[unit ideal: D(a) = Spec A]";
    pub const TWO_DIM: &str = "[two-dimensional: affine iff noetherian supht <= 1]";
    pub const FINITE_SECTIONS: &str = "[finitely generated sections: affine iff supht <= 1]";
    pub const PURITY: &str = "[purity: preimage in normalization has no isolated points]";
    pub const MONOID: &str = "[monoid ring: affine iff bight aB <= 1]";
    pub const TRIVIAL: &str = "[trivial]";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Affine,
    NotAffine,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Affine => "AFFINE",
            Verdict::NotAffine => "NOT AFFINE",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// A map out of the ambient algebra together with the height its author
/// claims for the extended ideal.
#[derive(Clone, Debug)]
pub struct HeightWitness {
    pub name: String,
    pub map: AlgebraMap,
    pub claimed: i64,
}

#[derive(Clone, Debug)]
pub struct WitnessOutcome {
    pub name: String,
    pub height: i64,
    pub extended: IdealInAlgebra,
    /// The extension is the unit ideal; its height 1 is a convention.
    pub unit_extension: bool,
}

impl WitnessOutcome {
    pub fn not_affine(&self) -> bool {
        self.height >= 2
    }
}

/// Checks the map, recomputes the height of the extended ideal and compares
/// it with the claim.
pub fn verify_witness(
    algebra: &Arc<PresentedAlgebra>,
    a: &IdealInAlgebra,
    w: &HeightWitness,
    cfg: &GbConfig,
) -> Result<WitnessOutcome> {
    if !PresentedAlgebra::same(w.map.source(), algebra)
        || !PresentedAlgebra::same(a.algebra(), algebra)
    {
        return Err(Error::SourceMismatch(format!(
            "witness `{}` does not start at `{}`",
            w.name,
            algebra.name()
        )));
    }
    if let Some(rel) = w.map.first_violation(cfg)? {
        return Err(Error::IllDefinedMap {
            map: w.map.name().to_string(),
            relation: rel.to_string(),
        });
    }
    let extended = extend_ideal(&w.map, a, cfg)?;
    let height = ideal_height(w.map.target(), &extended, cfg)?;
    if height != w.claimed {
        return Err(Error::HeightMismatch {
            witness: w.name.clone(),
            claimed: w.claimed,
            computed: height,
        });
    }
    let unit_extension = !extended.is_zero() && extended.is_unit(cfg)?;
    Ok(WitnessOutcome {
        name: w.name.clone(),
        height,
        extended,
        unit_extension,
    })
}

/// One section `q` of `O(U)` given by fractions on the charts `D(den)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionChart {
    pub charts: Vec<(Polynomial, Polynomial)>,
}

/// One section per generator of `a`, meant to satisfy `1 = sum q_i f_i`.
#[derive(Clone, Debug)]
pub struct AffinenessCertificate {
    pub name: String,
    pub sections: Vec<SectionChart>,
}

/// Default exponent bound before falling back to an exact saturation.
pub const DEFAULT_SATURATION_BOUND: u32 = 10;

/// Everything wrong with a certificate. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateFailure {
    SectionCount { expected: usize, found: usize },
    EmptySection { section: usize },
    ZeroDenominator { section: usize, chart: usize },
    Cover { section: usize, generator: String },
    Compatibility { section: usize, charts: (usize, usize) },
    Unity { charts: Vec<usize> },
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateFailure::SectionCount { expected, found } => {
                write!(f, "shape: expected {expected} sections, found {found}")
            }
            CertificateFailure::EmptySection { section } => {
                write!(f, "shape: section {section} has no charts")
            }
            CertificateFailure::ZeroDenominator { section, chart } => {
                write!(f, "cover: section {section} chart {chart} has a zero denominator")
            }
            CertificateFailure::Cover { section, generator } => write!(
                f,
                "cover: charts of section {section} miss part of U ({generator} not in the radical of the denominators)"
            ),
            CertificateFailure::Compatibility { section, charts } => write!(
                f,
                "compatibility: section {section} charts {} and {} disagree",
                charts.0, charts.1
            ),
            CertificateFailure::Unity { charts } => {
                let list: Vec<String> = charts.iter().map(|c| c.to_string()).collect();
                write!(f, "unity: chart selection [{}] does not give 1", list.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub name: String,
    pub failures: Vec<CertificateFailure>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_cover_failure(&self) -> bool {
        self.failures.iter().any(|f| {
            matches!(
                f,
                CertificateFailure::Cover { .. } | CertificateFailure::ZeroDenominator { .. }
            )
        })
    }

    pub fn has_compatibility_failure(&self) -> bool {
        self.failures
            .iter()
            .any(|f| matches!(f, CertificateFailure::Compatibility { .. }))
    }

    pub fn has_unity_failure(&self) -> bool {
        self.failures
            .iter()
            .any(|f| matches!(f, CertificateFailure::Unity { .. }))
    }
}

/// Whether `expr` vanishes in `A[1/d]`: first `expr * d^N ∈ I` for
/// `N <= bound`, then exactly via saturation.
fn vanishes_off(
    algebra: &PresentedAlgebra,
    expr: &Polynomial,
    d: &Polynomial,
    bound: u32,
    cfg: &GbConfig,
) -> Result<bool> {
    let gb = algebra.basis(cfg)?;
    let d = gb.reduce(d);
    let mut e = gb.reduce(expr);
    for _ in 0..=bound {
        if e.is_zero() {
            return Ok(true);
        }
        e = gb.reduce(&(&e * &d));
    }
    let sat = saturate(algebra.ideal(), &d, cfg)?;
    ideal_member(expr, &sat, cfg)
}

fn in_ring(algebra: &PresentedAlgebra, p: &Polynomial) -> Result<Polynomial> {
    if p.ring().vars() != algebra.ring().vars() || p.ring().field() != algebra.ring().field() {
        return Err(Error::RingMismatch);
    }
    Ok(p.with_order(algebra.ring()))
}

/// Checks cover, chart compatibility and the unity identity, collecting
/// every failure.
pub fn verify_affine_certificate(
    algebra: &Arc<PresentedAlgebra>,
    a: &IdealInAlgebra,
    c: &AffinenessCertificate,
    cfg: &GbConfig,
) -> Result<CertificateCheck> {
    verify_affine_certificate_with_bound(algebra, a, c, DEFAULT_SATURATION_BOUND, cfg)
}

pub fn verify_affine_certificate_with_bound(
    algebra: &Arc<PresentedAlgebra>,
    a: &IdealInAlgebra,
    c: &AffinenessCertificate,
    bound: u32,
    cfg: &GbConfig,
) -> Result<CertificateCheck> {
    if !PresentedAlgebra::same(a.algebra(), algebra) {
        return Err(Error::SourceMismatch(format!(
            "certificate `{}` is for an ideal outside `{}`",
            c.name,
            algebra.name()
        )));
    }
    let mut failures = Vec::new();
    let gens = a.gens();
    if c.sections.len() != gens.len() {
        failures.push(CertificateFailure::SectionCount {
            expected: gens.len(),
            found: c.sections.len(),
        });
        return Ok(CertificateCheck {
            name: c.name.clone(),
            failures,
        });
    }
    let sections: Vec<Vec<(Polynomial, Polynomial)>> = c
        .sections
        .iter()
        .map(|s| {
            s.charts
                .iter()
                .map(|(n, d)| Ok((in_ring(algebra, n)?, in_ring(algebra, d)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    for (si, charts) in sections.iter().enumerate() {
        if charts.is_empty() {
            failures.push(CertificateFailure::EmptySection { section: si + 1 });
            continue;
        }
        for (ci, (_, d)) in charts.iter().enumerate() {
            if algebra.is_zero_element(d, cfg)? {
                failures.push(CertificateFailure::ZeroDenominator {
                    section: si + 1,
                    chart: ci + 1,
                });
            }
        }
        let cover = algebra
            .ideal()
            .with(charts.iter().map(|(_, d)| d.clone()))?;
        for f in gens {
            if !radical_member(f, &cover, cfg)? {
                failures.push(CertificateFailure::Cover {
                    section: si + 1,
                    generator: f.to_string(),
                });
                break;
            }
        }
        for p in 0..charts.len() {
            for q in p + 1..charts.len() {
                let (np, dp) = &charts[p];
                let (nq, dq) = &charts[q];
                let diff = &(np * dq) - &(nq * dp);
                if !vanishes_off(algebra, &diff, &(dp * dq), bound, cfg)? {
                    failures.push(CertificateFailure::Compatibility {
                        section: si + 1,
                        charts: (p + 1, q + 1),
                    });
                }
            }
        }
    }
    if sections.iter().any(|s| s.is_empty()) {
        return Ok(CertificateCheck {
            name: c.name.clone(),
            failures,
        });
    }

    // every selection of one chart per section must give sum q_i f_i = 1
    let ring = algebra.ring().clone();
    let mut pick = vec![0usize; sections.len()];
    loop {
        let mut denom = Polynomial::one(&ring);
        for (s, &k) in sections.iter().zip(&pick) {
            denom = &denom * &s[k].1;
        }
        let mut sum = Polynomial::zero(&ring);
        for (i, (s, &k)) in sections.iter().zip(&pick).enumerate() {
            let mut term = &s[k].0 * &gens[i];
            for (j, (t, &l)) in sections.iter().zip(&pick).enumerate() {
                if j != i {
                    term = &term * &t[l].1;
                }
            }
            sum = &sum + &term;
        }
        let expr = &sum - &denom;
        if !vanishes_off(algebra, &expr, &denom, bound, cfg)? {
            failures.push(CertificateFailure::Unity {
                charts: pick.iter().map(|k| k + 1).collect(),
            });
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(CertificateCheck {
                    name: c.name.clone(),
                    failures,
                });
            }
            pick[i] += 1;
            if pick[i] < sections[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityOutcome {
    pub name: String,
    pub verdict: Verdict,
    pub extended: String,
}

/// The two-dimensional purity route: extend `a` along a user-supplied
/// normalization into a factorial ring and test `bight <= 1` there.
pub fn affine_via_purity(
    a2: &Arc<PresentedAlgebra>,
    nor: &AlgebraMap,
    a: &IdealInAlgebra,
    cfg: &GbConfig,
) -> Result<PurityOutcome> {
    let dim = algebra_dimension(a2, cfg)?;
    if dim != 2 {
        return Err(Error::DimensionNotTwo(dim));
    }
    if !PresentedAlgebra::same(nor.source(), a2) {
        return Err(Error::SourceMismatch(format!(
            "normalization `{}` does not start at `{}`",
            nor.name(),
            a2.name()
        )));
    }
    let target = nor.target();
    if !target.is_factorial_ambient() {
        return Err(Error::NotFactorial(format!(
            "normalization target `{}` is not asserted `factorial`",
            target.name()
        )));
    }
    if let Some(rel) = nor.first_violation(cfg)? {
        return Err(Error::IllDefinedMap {
            map: nor.name().to_string(),
            relation: rel.to_string(),
        });
    }
    let ext = extend_ideal(nor, a, cfg)?;
    let verdict = if ext.is_zero() {
        Verdict::Unknown
    } else if bight_leq_one(target, &ext, cfg)? {
        Verdict::Affine
    } else {
        Verdict::NotAffine
    };
    Ok(PurityOutcome {
        name: nor.name().to_string(),
        verdict,
        extended: ext.to_string(),
    })
}

/// A verified piece of evidence, ready for the ledger.
#[derive(Clone, Debug)]
pub enum Evidence {
    Witness(WitnessOutcome),
    Certificate(CertificateCheck),
    Purity(PurityOutcome),
    /// Verdict of the monoid-ring decision, with the name of the embedding.
    Monoid { name: String, verdict: Verdict },
}

impl Evidence {
    pub fn name(&self) -> &str {
        match self {
            Evidence::Witness(w) => &w.name,
            Evidence::Certificate(c) => &c.name,
            Evidence::Purity(p) => &p.name,
            Evidence::Monoid { name, .. } => name,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Evidence::Witness(_) => "witness",
            Evidence::Certificate(_) => "certificate",
            Evidence::Purity(_) => "normalization",
            Evidence::Monoid { .. } => "embedding",
        }
    }

    fn label(&self) -> String {
        format!("{} `{}`", self.kind(), self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: i64,
    pub source: String,
    pub tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReason {
    pub verdict: Verdict,
    pub source: String,
    pub tag: String,
}

/// `[lower, upper]` for the superheight of `a`, with the source and
/// citation of each bound, and the affineness verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperheightLedger {
    pub algebra: String,
    pub ideal: String,
    pub height: Option<i64>,
    pub lower: Bound,
    pub upper: Bound,
    pub verdict: Verdict,
    pub reasons: Vec<VerdictReason>,
    pub sections_finitely_generated: bool,
    pub notes: Vec<String>,
}

impl SuperheightLedger {
    pub fn is_exact(&self) -> bool {
        self.lower.value == self.upper.value
    }
}

fn raise(b: &mut Bound, value: i64, source: &str, tag: &str) {
    if value > b.value {
        *b = Bound {
            value,
            source: source.into(),
            tag: tag.into(),
        };
    }
}

fn lower_to(b: &mut Bound, value: i64, source: &str, tag: &str) {
    if value < b.value {
        *b = Bound {
            value,
            source: source.into(),
            tag: tag.into(),
        };
    }
}

/// Folds verified evidence into a ledger. Fails with
/// [`Error::InconsistentEvidence`] naming the conflicting sources when the
/// interval is empty or both verdicts are supported.
pub fn ledger_combine(
    algebra: &Arc<PresentedAlgebra>,
    a: &IdealInAlgebra,
    evidence: &[Evidence],
    sections_finitely_generated: bool,
    cfg: &GbConfig,
) -> Result<SuperheightLedger> {
    if !PresentedAlgebra::same(a.algebra(), algebra) {
        return Err(Error::SourceMismatch(format!(
            "ideal does not live in `{}`",
            algebra.name()
        )));
    }
    let mut notes = Vec::new();
    let mut reasons = Vec::new();
    let dim = algebra_dimension(algebra, cfg)?;
    let unit = a.is_unit(cfg)?;

    let height = if algebra.is_domain() {
        Some(ideal_height(algebra, a, cfg)?)
    } else {
        notes.push(format!(
            "`{}` is not asserted a domain; its own height is not used",
            algebra.name()
        ));
        None
    };
    let mut lower = Bound {
        value: 0,
        source: "none".into(),
        tag: tags::TRIVIAL.into(),
    };
    if let Some(h) = height {
        raise(&mut lower, h, "height of a", tags::HEIGHT);
        if h >= 2 {
            reasons.push(VerdictReason {
                verdict: Verdict::NotAffine,
                source: "height of a (identity witness)".into(),
                tag: tags::CODIM.into(),
            });
        }
    }
    if unit {
        notes.push("a is the unit ideal: height 1 by convention".into());
        reasons.push(VerdictReason {
            verdict: Verdict::Affine,
            source: "unit ideal".into(),
            tag: tags::UNIT.into(),
        });
    }

    let ngens = a.gens().len() as i64;
    let mut upper = Bound {
        value: ngens,
        source: format!("{ngens} generators"),
        tag: tags::ARA.into(),
    };
    if dim >= 0 {
        lower_to(&mut upper, dim + 1, &format!("dim A = {dim}"), tags::DIMENSION);
    }
    if ngens == 1 && !unit {
        reasons.push(VerdictReason {
            verdict: Verdict::Affine,
            source: "principal ideal".into(),
            tag: tags::PRINCIPAL.into(),
        });
    }

    for e in evidence {
        let label = e.label();
        match e {
            Evidence::Witness(w) => {
                raise(
                    &mut lower,
                    w.height,
                    &label,
                    &format!("{} {}", tags::WITNESS, tags::OVER_FIELD),
                );
                if w.unit_extension {
                    notes.push(format!(
                        "{label}: extended ideal is the unit ideal (height 1 by convention)"
                    ));
                }
                if w.not_affine() {
                    reasons.push(VerdictReason {
                        verdict: Verdict::NotAffine,
                        source: label,
                        tag: format!("{} {}", tags::WITNESS, tags::CODIM),
                    });
                }
            }
            Evidence::Certificate(c) => {
                if !c.passed() {
                    return Err(Error::CertificateRejected(format!(
                        "certificate `{}` did not verify",
                        c.name
                    )));
                }
                lower_to(&mut upper, 1, &label, tags::UNITY);
                reasons.push(VerdictReason {
                    verdict: Verdict::Affine,
                    source: label,
                    tag: tags::UNITY.into(),
                });
            }
            Evidence::Purity(p) => apply_verdict(
                p.verdict,
                &label,
                tags::PURITY,
                &mut lower,
                &mut upper,
                &mut reasons,
            ),
            Evidence::Monoid { verdict, .. } => apply_verdict(
                *verdict,
                &label,
                tags::MONOID,
                &mut lower,
                &mut upper,
                &mut reasons,
            ),
        }
    }

    if upper.value <= 1 && !reasons.iter().any(|r| r.verdict == Verdict::Affine) {
        if dim == 2 {
            reasons.push(VerdictReason {
                verdict: Verdict::Affine,
                source: upper.source.clone(),
                tag: tags::TWO_DIM.into(),
            });
        } else if sections_finitely_generated {
            reasons.push(VerdictReason {
                verdict: Verdict::Affine,
                source: "sections-finitely-generated".into(),
                tag: tags::FINITE_SECTIONS.into(),
            });
        }
    }

    let mut conflicts = Vec::new();
    if lower.value > upper.value {
        conflicts.push(format!(
            "lower bound {} from {} exceeds upper bound {} from {}",
            lower.value, lower.source, upper.value, upper.source
        ));
    }
    let pro: Vec<&VerdictReason> = reasons
        .iter()
        .filter(|r| r.verdict == Verdict::Affine)
        .collect();
    let con: Vec<&VerdictReason> = reasons
        .iter()
        .filter(|r| r.verdict == Verdict::NotAffine)
        .collect();
    if !pro.is_empty() && !con.is_empty() {
        let names = |rs: &[&VerdictReason]| {
            rs.iter()
                .map(|r| r.source.clone())
                .collect::<Vec<_>>()
                .join(", ")
        };
        conflicts.push(format!(
            "AFFINE by {} contradicts NOT AFFINE by {}",
            names(&pro),
            names(&con)
        ));
    }
    if !conflicts.is_empty() {
        return Err(Error::InconsistentEvidence(conflicts.join("; ")));
    }

    let verdict = if !pro.is_empty() {
        Verdict::Affine
    } else if !con.is_empty() {
        Verdict::NotAffine
    } else {
        Verdict::Unknown
    };
    Ok(SuperheightLedger {
        algebra: algebra.name().to_string(),
        ideal: a.to_string(),
        height,
        lower,
        upper,
        verdict,
        reasons,
        sections_finitely_generated,
        notes,
    })
}

fn apply_verdict(
    verdict: Verdict,
    label: &str,
    tag: &str,
    lower: &mut Bound,
    upper: &mut Bound,
    reasons: &mut Vec<VerdictReason>,
) {
    match verdict {
        Verdict::Affine => lower_to(upper, 1, label, tag),
        Verdict::NotAffine => raise(lower, 2, label, tag),
        Verdict::Unknown => return,
    }
    reasons.push(VerdictReason {
        verdict,
        source: label.into(),
        tag: tag.into(),
    });
}

/// Identity witness: the height of `a` in `A` itself.
pub fn identity_witness(algebra: &Arc<PresentedAlgebra>, name: &str, claimed: i64) -> HeightWitness {
    HeightWitness {
        name: name.into(),
        map: AlgebraMap::identity(algebra),
        claimed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFlags;
    use crate::polycore::PolyRing;

    fn cfg() -> GbConfig {
        GbConfig::default()
    }

    const DOMAIN: AlgebraFlags = AlgebraFlags {
        domain: true,
        factorial: false,
    };

    struct Ex31 {
        a: Arc<PresentedAlgebra>,
        ideal: IdealInAlgebra,
        cert: AffinenessCertificate,
    }

    fn example_3_1(k: u32) -> Ex31 {
        let r = PolyRing::rational(["X1", "X2", "Y1", "Y2"]).unwrap();
        let v = |n| Polynomial::var_named(&r, n);
        let (x1, x2, y1, y2) = (v("X1"), v("X2"), v("Y1"), v("Y2"));
        let rel = &(&(&x1.pow(k) * &x2.pow(k)) + &(&y1 * &x1.pow(k + 1))) + &(&y2 * &x2.pow(k + 1));
        let a = PresentedAlgebra::new("A", &r, vec![rel], DOMAIN).unwrap();
        let ideal = IdealInAlgebra::new(&a, vec![x1.clone(), x2.clone()], &cfg()).unwrap();
        let w = SectionChart {
            charts: vec![
                (-&y1, x2.pow(k)),
                (&x1.pow(k) + &(&y2 * &x2), x1.pow(k + 1)),
            ],
        };
        let z = SectionChart {
            charts: vec![
                (-&y2, x1.pow(k)),
                (&x2.pow(k) + &(&y1 * &x1), x2.pow(k + 1)),
            ],
        };
        Ex31 {
            a,
            ideal,
            cert: AffinenessCertificate {
                name: "c".into(),
                sections: vec![w, z],
            },
        }
    }

    #[test]
    fn example_3_1_certificate_verifies() {
        for k in 1..=2 {
            let ex = example_3_1(k);
            let check = verify_affine_certificate(&ex.a, &ex.ideal, &ex.cert, &cfg()).unwrap();
            assert!(check.passed(), "k={k}: {:?}", check.failures);
            let ledger = ledger_combine(
                &ex.a,
                &ex.ideal,
                &[Evidence::Certificate(check)],
                false,
                &cfg(),
            )
            .unwrap();
            assert_eq!((ledger.lower.value, ledger.upper.value), (1, 1));
            assert_eq!(ledger.verdict, Verdict::Affine);
        }
    }

    #[test]
    fn perturbed_numerator_fails_unity() {
        let mut ex = example_3_1(1);
        let one = Polynomial::one(ex.a.ring());
        let n = &ex.cert.sections[0].charts[0].0 + &one;
        ex.cert.sections[0].charts[0].0 = n;
        let check = verify_affine_certificate(&ex.a, &ex.ideal, &ex.cert, &cfg()).unwrap();
        assert!(!check.passed());
        assert!(check.has_unity_failure());
        assert!(check.has_compatibility_failure());
        assert!(!check.has_cover_failure());
    }

    #[test]
    fn single_chart_without_cover_fails() {
        let mut ex = example_3_1(1);
        ex.cert.sections[0].charts.truncate(1);
        let check = verify_affine_certificate(&ex.a, &ex.ideal, &ex.cert, &cfg()).unwrap();
        assert!(check.has_cover_failure());
    }

    #[test]
    fn unit_ideal_constant_section() {
        let r = PolyRing::rational(["x"]).unwrap();
        let a = PresentedAlgebra::polynomial("K", &r).unwrap();
        let one = Polynomial::one(&r);
        let ideal = IdealInAlgebra::new(&a, vec![one.clone()], &cfg()).unwrap();
        let cert = AffinenessCertificate {
            name: "c".into(),
            sections: vec![SectionChart {
                charts: vec![(one.clone(), one)],
            }],
        };
        assert!(verify_affine_certificate(&a, &ideal, &cert, &cfg())
            .unwrap()
            .passed());
    }

    fn example_1_1() -> (Arc<PresentedAlgebra>, IdealInAlgebra, HeightWitness) {
        let r = PolyRing::rational(["R", "S", "T", "Z"]).unwrap();
        let v = |n| Polynomial::var_named(&r, n);
        let rel = &(&v("R") * &v("S")) - &(&v("T") * &v("Z"));
        let a = PresentedAlgebra::new("A", &r, vec![rel], DOMAIN).unwrap();
        let p = PolyRing::rational(["R", "T"]).unwrap();
        let plane = PresentedAlgebra::polynomial("P", &p).unwrap();
        let pv = |n| Polynomial::var_named(&p, n);
        let zero = Polynomial::zero(&p);
        let phi = AlgebraMap::new("phi", &a, &plane, vec![pv("R"), zero.clone(), pv("T"), zero])
            .unwrap();
        let ideal = IdealInAlgebra::new(&a, vec![v("R"), v("T")], &cfg()).unwrap();
        (
            a,
            ideal,
            HeightWitness {
                name: "w".into(),
                map: phi,
                claimed: 2,
            },
        )
    }

    #[test]
    fn example_1_1_ledger() {
        let (a, ideal, w) = example_1_1();
        let out = verify_witness(&a, &ideal, &w, &cfg()).unwrap();
        assert_eq!(out.height, 2);
        assert!(out.not_affine());
        let ledger =
            ledger_combine(&a, &ideal, &[Evidence::Witness(out)], false, &cfg()).unwrap();
        assert_eq!(ledger.height, Some(1));
        assert_eq!((ledger.lower.value, ledger.upper.value), (2, 2));
        assert_eq!(ledger.upper.tag, tags::ARA);
        assert_eq!(ledger.verdict, Verdict::NotAffine);
    }

    #[test]
    fn wrong_claim_is_rejected() {
        let (a, ideal, mut w) = example_1_1();
        w.claimed = 3;
        assert!(matches!(
            verify_witness(&a, &ideal, &w, &cfg()),
            Err(Error::HeightMismatch {
                claimed: 3,
                computed: 2,
                ..
            })
        ));
    }

    #[test]
    fn identity_witness_gives_height() {
        let (a, ideal, _) = example_1_1();
        let w = identity_witness(&a, "id", 1);
        let out = verify_witness(&a, &ideal, &w, &cfg()).unwrap();
        assert_eq!(out.height, 1);
        assert!(!out.not_affine());
    }

    #[test]
    fn punctured_plane() {
        let r = PolyRing::rational(["x", "y"]).unwrap();
        let a = PresentedAlgebra::polynomial("P", &r).unwrap();
        let ideal = IdealInAlgebra::new(
            &a,
            vec![Polynomial::var(&r, 0), Polynomial::var(&r, 1)],
            &cfg(),
        )
        .unwrap();
        let ledger = ledger_combine(&a, &ideal, &[], false, &cfg()).unwrap();
        assert_eq!((ledger.lower.value, ledger.upper.value), (2, 2));
        assert_eq!(ledger.verdict, Verdict::NotAffine);
    }

    #[test]
    fn certificate_and_witness_conflict() {
        let (a, ideal, w) = example_1_1();
        let out = verify_witness(&a, &ideal, &w, &cfg()).unwrap();
        let fake = CertificateCheck {
            name: "c".into(),
            failures: vec![],
        };
        let err = ledger_combine(
            &a,
            &ideal,
            &[Evidence::Witness(out), Evidence::Certificate(fake)],
            false,
            &cfg(),
        )
        .unwrap_err();
        let Error::InconsistentEvidence(msg) = err else {
            panic!("{err:?}")
        };
        assert!(msg.contains("witness `w`") && msg.contains("certificate `c`"), "{msg}");
    }

    #[test]
    fn purity_on_cone_and_plane() {
        let r = PolyRing::rational(["x", "y", "z"]).unwrap();
        let v = |n| Polynomial::var_named(&r, n);
        let cone = PresentedAlgebra::new(
            "C",
            &r,
            vec![&(&v("x") * &v("z")) - &v("y").pow(2)],
            DOMAIN,
        )
        .unwrap();
        let t = PolyRing::rational(["U", "V"]).unwrap();
        let b = PresentedAlgebra::polynomial("B", &t).unwrap();
        let (u, w) = (Polynomial::var(&t, 0), Polynomial::var(&t, 1));
        let nor = AlgebraMap::new("nor", &cone, &b, vec![u.pow(2), &u * &w, w.pow(2)]).unwrap();
        let ruling = IdealInAlgebra::new(&cone, vec![v("x"), v("y")], &cfg()).unwrap();
        let vertex = IdealInAlgebra::new(&cone, vec![v("x"), v("z")], &cfg()).unwrap();
        assert_eq!(
            affine_via_purity(&cone, &nor, &ruling, &cfg()).unwrap().verdict,
            Verdict::Affine
        );
        assert_eq!(
            affine_via_purity(&cone, &nor, &vertex, &cfg()).unwrap().verdict,
            Verdict::NotAffine
        );

        let plane = PresentedAlgebra::polynomial("P", &t).unwrap();
        let principal = IdealInAlgebra::new(&plane, vec![u.clone()], &cfg()).unwrap();
        let id = AlgebraMap::identity(&plane);
        assert_eq!(
            affine_via_purity(&plane, &id, &principal, &cfg()).unwrap().verdict,
            Verdict::Affine
        );
        assert!(matches!(
            affine_via_purity(&cone, &AlgebraMap::identity(&cone), &ruling, &cfg()),
            Err(Error::NotFactorial(_))
        ));
    }
}
