#![allow(dead_code)]

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codim_one::algebra::{bight_leq_one, ideal_height, IdealInAlgebra, PresentedAlgebra};
use codim_one::certify::verify_witness;
use codim_one::error::Error;
use codim_one::groebner::{groebner_basis, ideal_member, GbConfig, IdealGens};
use codim_one::polycore::{Field, Monomial, MonomialOrder, PolyRing, Polynomial};
use codim_one::session::paper::PAPER_SESSIONS;
use codim_one::session::{parse_session, resolve, Entity};

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(n: usize) -> Arc<PolyRing> {
    PolyRing::rational(VARS[..n].iter().copied()).unwrap()
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponent vector to coefficient, zero entries omitted.
pub type Dense = BTreeMap<Vec<u32>, BigRational>;

pub fn to_dense(f: &Polynomial) -> Dense {
    f.terms()
        .iter()
        .map(|(m, c)| (m.exponents().to_vec(), c.as_rational().unwrap().clone()))
        .collect()
}

pub fn from_dense(r: &Arc<PolyRing>, d: &Dense) -> Polynomial {
    Polynomial::from_terms(
        r,
        d.iter().map(|(e, c)| {
            (
                Monomial::new(e.clone()),
                Field::Rational.from_rational(c).unwrap(),
            )
        }),
    )
}

fn dense_mul_mono(d: &Dense, m: &[u32]) -> Dense {
    d.iter()
        .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
        .collect()
}

pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: u32, density: f64) -> Dense {
    let mut out = Dense::new();
    for m in monomials_of_degree(n, d) {
        if rng.gen_bool(density) {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                out.insert(m, q(c));
            }
        }
    }
    out
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize) -> Dense {
    let mut out = Dense::new();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let d = rng.gen_range(0..=max_deg);
        let ms = monomials_of_degree(n, d);
        let m = ms.choose(rng).unwrap().clone();
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            *out.entry(m).or_insert_with(BigRational::zero) += q(c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Row-echelon span over Q, keyed by largest exponent vector.
#[derive(Default)]
pub struct Echelon {
    rows: BTreeMap<Vec<u32>, Dense>,
}

impl Echelon {
    fn reduce(&self, mut v: Dense) -> Dense {
        while let Some((k, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            let Some(row) = self.rows.get(&k) else { break };
            let f = c / &row[&k];
            for (e, rc) in row {
                let x = v.entry(e.clone()).or_insert_with(BigRational::zero);
                *x -= &f * rc;
                if x.is_zero() {
                    v.remove(e);
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Dense) -> bool {
        let v = self.reduce(v);
        match v.keys().next_back().cloned() {
            Some(k) => {
                self.rows.insert(k, v);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &Dense) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Membership of a homogeneous `f` of degree `d` in the ideal of the
/// homogeneous generators: exactly the span of the degree-`d` multiples.
pub fn membership_oracle(n: usize, gens: &[(Dense, u32)], f: &Dense, d: u32) -> bool {
    let mut span = Echelon::default();
    for (g, dg) in gens {
        if *dg > d {
            continue;
        }
        for m in monomials_of_degree(n, d - dg) {
            span.insert(dense_mul_mono(g, &m));
        }
    }
    span.contains(f)
}

/// Groebner membership against the linear-algebra oracle on random
/// homogeneous ideals. Returns the disagreements.
pub fn membership_suite(cases: usize, seed: u64) -> Vec<String> {
    let cfg = GbConfig::default();
    let mut rng = rng(seed);
    let mut bad = Vec::new();
    let mut seen = [0usize; 2];
    for case in 0..cases {
        let n = rng.gen_range(1..=3);
        let r = ring(n);
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let d = rng.gen_range(1..=3);
            let g = random_homogeneous(&mut rng, n, d, 0.6);
            if !g.is_empty() {
                gens.push((g, d));
            }
        }
        let d = rng.gen_range(1..=4);
        let f = if rng.gen_bool(0.5) {
            let mut acc = Dense::new();
            for (g, dg) in &gens {
                if *dg <= d {
                    let h = from_dense(&r, &random_homogeneous(&mut rng, n, d - dg, 0.5));
                    let p = &h * &from_dense(&r, g);
                    acc = to_dense(&(&from_dense(&r, &acc) + &p));
                }
            }
            acc
        } else {
            random_homogeneous(&mut rng, n, d, 0.7)
        };
        let ideal = IdealGens::new(&r, gens.iter().map(|(g, _)| from_dense(&r, g)).collect())
            .unwrap();
        let fp = from_dense(&r, &f);
        let expected = membership_oracle(n, &gens, &f, d);
        seen[expected as usize] += 1;
        match ideal_member(&fp, &ideal, &cfg) {
            Ok(got) if got == expected => {}
            other => bad.push(format!(
                "case {case}: {fp} in {ideal}: groebner {other:?}, oracle {expected}"
            )),
        }
    }
    if seen.contains(&0) {
        bad.push(format!("degenerate sample: {seen:?} (non-members, members)"));
    }
    bad
}

fn reduced_basis(r: &Arc<PolyRing>, gens: Vec<Polynomial>, order: MonomialOrder) -> Vec<String> {
    let cfg = GbConfig::default();
    let g = IdealGens::new(r, gens).unwrap();
    groebner_basis(&g, order, &cfg)
        .unwrap()
        .polys()
        .iter()
        .map(|p| p.to_string())
        .collect()
}

/// Reduced bases agree after permuting, rescaling and mixing the
/// generators. Returns the disagreements.
pub fn permutation_suite(cases: usize, seed: u64) -> Vec<String> {
    let mut rng = rng(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let order = match rng.gen_range(0..3) {
            0 => MonomialOrder::Lex,
            1 => MonomialOrder::GrevLex,
            _ => MonomialOrder::Block(rng.gen_range(0..=2)),
        };
        // three dense generators in three variables make elimination orders
        // swell past what plain rational Buchberger handles quickly
        let n = match order {
            MonomialOrder::GrevLex => rng.gen_range(1..=3),
            _ => rng.gen_range(1..=2),
        };
        let r = ring(n);
        let order = match order {
            MonomialOrder::Block(k) => MonomialOrder::Block(k.min(n)),
            o => o,
        };
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3))
            .map(|_| from_dense(&r, &random_poly(&mut rng, n, 3, 3)))
            .collect();
        let mut other = gens.clone();
        other.shuffle(&mut rng);
        for g in other.iter_mut() {
            let c: i64 = *[-2i64, 3, 5].choose(&mut rng).unwrap();
            *g = g.scale(&Field::Rational.from_i64(c));
        }
        if other.len() > 1 {
            let m = from_dense(&r, &random_poly(&mut rng, n, 1, 2));
            let extra = &other[0] + &(&m * &other[1]);
            other[0] = extra;
        }
        let a = reduced_basis(&r, gens.clone(), order);
        let b = reduced_basis(&r, other, order);
        if a != b {
            bad.push(format!("case {case} ({order:?}): {a:?} vs {b:?}"));
        }
    }
    bad
}

/// Pairwise non-proportional linear forms in x, y, z. The first three are
/// the variables.
pub const FORMS: [[i64; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, -1],
    [0, 1, 2],
    [1, 1, 1],
];

pub fn form_poly(r: &Arc<PolyRing>, i: usize) -> Polynomial {
    let mut p = Polynomial::zero(r);
    for (v, &c) in FORMS[i].iter().enumerate() {
        if c != 0 {
            p = &p + &Polynomial::var(r, v).scale(&Field::Rational.from_i64(c));
        }
    }
    p
}

pub fn rank_of(forms: &[usize]) -> usize {
    let mut e = Echelon::default();
    for &i in forms {
        let row: Dense = FORMS[i]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(v, c)| (vec![v as u32], q(*c)))
            .collect();
        e.insert(row);
    }
    e.rank()
}

/// Each generator is a product of powers of distinct forms, listed by index.
pub type Factored = Vec<Vec<(usize, u32)>>;

pub fn random_factored(rng: &mut ChaCha8Rng, monomial_only: bool) -> Factored {
    let pool = if monomial_only { 3 } else { FORMS.len() };
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut idx: Vec<usize> = (0..pool).collect();
            idx.shuffle(rng);
            idx.truncate(rng.gen_range(1..=3));
            idx.into_iter().map(|i| (i, rng.gen_range(1..=2))).collect()
        })
        .collect()
}

pub fn factored_gens(r: &Arc<PolyRing>, f: &Factored) -> Vec<Polynomial> {
    f.iter()
        .map(|g| {
            g.iter()
                .fold(Polynomial::one(r), |acc, &(i, e)| &acc * &form_poly(r, i).pow(e))
        })
        .collect()
}

/// Every choice of one factor per generator cuts out a linear space.
fn choices(f: &Factored) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for g in f {
        out = out
            .into_iter()
            .flat_map(|c| {
                g.iter().map(move |&(i, _)| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }
    out
}

/// Big height at most one iff every linear piece of `V(a)` lies inside a
/// hyperplane dividing all generators.
pub fn bight_oracle(f: &Factored) -> bool {
    let common: Vec<usize> = f[0]
        .iter()
        .map(|&(i, _)| i)
        .filter(|i| f.iter().all(|g| g.iter().any(|(j, _)| j == i)))
        .collect();
    choices(f).iter().all(|c| {
        let rc = rank_of(c);
        common.iter().any(|&l| {
            let mut with = c.clone();
            with.push(l);
            rank_of(&with) == rc
        })
    })
}

/// Height `min rank` over the linear pieces; dimension `n - min rank`.
pub fn height_oracle(f: &Factored) -> usize {
    choices(f).iter().map(|c| rank_of(c)).min().unwrap()
}

/// `bight_leq_one` against factor enumeration. Returns the disagreements.
pub fn bight_suite(cases: usize, seed: u64) -> Vec<String> {
    let cfg = GbConfig::default();
    let mut rng = rng(seed);
    let r = ring(3);
    let a = PresentedAlgebra::polynomial("P", &r).unwrap();
    let mut bad = Vec::new();
    let mut seen = [0usize; 2];
    for case in 0..cases {
        let f = random_factored(&mut rng, case % 2 == 0);
        let ideal = IdealInAlgebra::new(&a, factored_gens(&r, &f), &cfg).unwrap();
        let expected = bight_oracle(&f);
        seen[expected as usize] += 1;
        match bight_leq_one(&a, &ideal, &cfg) {
            Ok(got) if got == expected => {}
            other => bad.push(format!(
                "case {case}: {ideal}: computed {other:?}, oracle {expected}"
            )),
        }
    }
    if seen.contains(&0) {
        bad.push(format!("degenerate sample: {seen:?} (bight >= 2, bight <= 1)"));
    }
    bad
}

/// Minimal primes of a monomial ideal are the minimal variable covers of the
/// generators' supports; returns the largest cover size.
pub fn monomial_bight(supports: &[Vec<usize>], n: usize) -> usize {
    let covers: Vec<u32> = (0u32..1 << n)
        .filter(|s| supports.iter().all(|g| g.iter().any(|v| s & (1 << v) != 0)))
        .collect();
    covers
        .iter()
        .filter(|&&s| !covers.iter().any(|&t| t != s && t & s == t))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// One row per (session, ideal, witness): `ht <= witness height <= #gens`.
pub struct ChainRow {
    pub session: String,
    pub ideal: String,
    pub witness: String,
    pub height: i64,
    pub witness_height: i64,
    pub generators: usize,
}

pub fn corpus() -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = PAPER_SESSIONS
        .iter()
        .map(|(k, t)| (k.to_string(), t.to_string()))
        .collect();
    v.push((
        "guard".into(),
        include_str!("../data/guard.cod").to_string(),
    ));
    v
}

pub fn chain_rows() -> Vec<ChainRow> {
    let cfg = GbConfig::default();
    let mut rows = Vec::new();
    for (id, text) in corpus() {
        let s = parse_session(&text).unwrap();
        let res = resolve(&s, &cfg).unwrap();
        let names: Vec<String> = s.items.iter().filter_map(|i| i.node.name()).map(|n| n.node.clone()).collect();
        for iname in &names {
            let Some(Entity::Ideal(a)) = res.get(iname) else { continue };
            let alg = a.algebra();
            let ht = ideal_height(alg, a, &cfg).unwrap();
            rows.push(ChainRow {
                session: id.clone(),
                ideal: iname.clone(),
                witness: "identity".into(),
                height: ht,
                witness_height: ht,
                generators: a.gens().len(),
            });
            for wname in &names {
                let Some(Entity::Witness(w)) = res.get(wname) else { continue };
                if !PresentedAlgebra::same(w.map.source(), alg) {
                    continue;
                }
                let o = verify_witness(alg, a, w, &cfg).unwrap();
                rows.push(ChainRow {
                    session: id.clone(),
                    ideal: iname.clone(),
                    witness: wname.clone(),
                    height: ht,
                    witness_height: o.height,
                    generators: a.gens().len(),
                });
            }
        }
    }
    rows
}

const SNIPPETS: &[&str] = &[
    "(", ")", "{", "}", "[", "]", ",", "^", "*", "-", "+", "/", "->", "=", ":", "#", "\"",
    "\n", " ", "task", "ring", "algebra", "ideal", "map", "witness", "certificate", "section",
    "monoid", "embedding", "lattice", "blowup", "class", "config", "ledger", "using", "height",
    "domain", "factorial", "QQ", "GF", "99999999999999999999", "0", "-1", "x", "^^", "é", "∞",
    "\t", "\r\n", "((((((((((", "intersection-property", "sections-finitely-generated",
];

pub fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(1..=4) {
        let len = chars.len();
        match rng.gen_range(0..6) {
            0 if len > 0 => {
                let a = rng.gen_range(0..len);
                let b = (a + rng.gen_range(1..=8)).min(len);
                chars.drain(a..b);
            }
            1 => {
                let at = rng.gen_range(0..=len);
                let s = SNIPPETS.choose(rng).unwrap();
                chars.splice(at..at, s.chars());
            }
            2 if len > 0 => {
                let a = rng.gen_range(0..len);
                let b = (a + rng.gen_range(1..=30)).min(len);
                let dup: Vec<char> = chars[a..b].to_vec();
                let at = rng.gen_range(0..=chars.len());
                chars.splice(at..at, dup);
            }
            3 if len > 1 => {
                let a = rng.gen_range(0..len);
                let b = rng.gen_range(0..len);
                chars.swap(a, b);
            }
            4 if len > 0 => {
                chars.truncate(rng.gen_range(0..len));
            }
            _ if len > 0 => {
                let a = rng.gen_range(0..len);
                chars[a] = char::from_u32(rng.gen_range(0..0x250)).unwrap_or('?');
            }
            _ => {}
        }
    }
    chars.into_iter().collect()
}

/// Parses mutated corpus files. Returns the crashes and unlocated errors.
pub fn fuzz_suite(cases: usize, seed: u64) -> Vec<String> {
    let corpus = corpus();
    let mut rng = rng(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let (id, text) = corpus.choose(&mut rng).unwrap();
        let m = mutate(&mut rng, text);
        let lines = m.lines().count().max(1) + 1;
        match catch_unwind(AssertUnwindSafe(|| parse_session(&m))) {
            Err(_) => bad.push(format!("case {case} ({id}): panic on {m:?}")),
            Ok(Ok(_)) => {}
            Ok(Err(Error::Parse { line, col, .. })) if line >= 1 && line <= lines && col >= 1 => {}
            Ok(Err(e)) => bad.push(format!("case {case} ({id}): unlocated {e}")),
        }
    }
    bad
}

pub fn one() -> BigRational {
    BigRational::one()
}
