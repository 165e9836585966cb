//! Affine monoids, toric presentations of `K[M]`, and the affineness
//! decision through the factorial extension `K[M] -> B` given by an
//! embedding `M -> Z^s x N^k` with the intersection property.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{
    bight_leq_one, extend_ideal, AlgebraFlags, AlgebraMap, IdealInAlgebra, PresentedAlgebra,
};
use crate::certify::Verdict;
use crate::error::{Error, Result};
use crate::groebner::{elim_ideal, GbConfig, IdealGens};
use crate::polycore::{Field, Monomial, MonomialOrder, PolyRing, Polynomial};

/// Finitely generated submonoid of `Z^rank`, one variable name per
/// generator. `positive` and `normal` are user assertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    pub name: String,
    pub rank: usize,
    pub generators: Vec<Vec<i64>>,
    pub vars: Vec<String>,
    pub positive: bool,
    pub normal: bool,
}

impl AffineMonoid {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        generators: Vec<Vec<i64>>,
        vars: Vec<String>,
        positive: bool,
        normal: bool,
    ) -> Result<Self> {
        let name = name.into();
        if generators.is_empty() {
            return Err(Error::Monoid(format!("`{name}` has no generators")));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::Monoid(format!(
                    "`{name}`: generator {} has {} coordinates, rank is {rank}",
                    i + 1,
                    g.len()
                )));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(Error::Monoid(format!(
                    "`{name}`: generator {} is zero",
                    i + 1
                )));
            }
        }
        if vars.len() != generators.len() {
            return Err(Error::ArityMismatch {
                expected: generators.len(),
                found: vars.len(),
            });
        }
        Ok(AffineMonoid {
            name,
            rank,
            generators,
            vars,
            positive,
            normal,
        })
    }
}

/// `K[M]` as a quotient of `K[x_1..x_n]` by the kernel of the monomial map.
#[derive(Clone, Debug)]
pub struct ToricPresentation {
    pub monoid: AffineMonoid,
    pub algebra: Arc<PresentedAlgebra>,
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Laurent monomial `prod t_j^{max(e_j,0)} u_j^{max(-e_j,0)}` in a ring whose
/// first `2d` variables are `t_1..t_d, u_1..u_d`.
fn laurent_exponents(e: &[i64], arity: usize) -> Monomial {
    let d = e.len();
    let mut exps = vec![0u32; arity];
    for (j, &c) in e.iter().enumerate() {
        if c >= 0 {
            exps[j] = c as u32;
        } else {
            exps[d + j] = (-c) as u32;
        }
    }
    Monomial::new(exps)
}

/// Kernel of `x_i -> t^{g_i}` over the rationals, by eliminating the torus
/// variables `t_j` and their inverses `u_j` (`t_j u_j = 1`).
pub fn toric_ideal(m: &AffineMonoid, cfg: &GbConfig) -> Result<ToricPresentation> {
    let d = m.rank;
    let mut names = Vec::new();
    for j in 0..d {
        names.push(fresh(&format!("t{}", j + 1), &m.vars));
    }
    for j in 0..d {
        names.push(fresh(&format!("u{}", j + 1), &m.vars));
    }
    names.extend(m.vars.iter().cloned());
    let big = PolyRing::new(names, Field::Rational, MonomialOrder::Block(2 * d))?;
    let one = Field::Rational.one();
    let mut gens = Vec::new();
    for (i, g) in m.generators.iter().enumerate() {
        let x = Polynomial::var(&big, 2 * d + i);
        let t = Polynomial::monomial(&big, laurent_exponents(g, big.arity()), one.clone());
        gens.push(&x - &t);
    }
    for j in 0..d {
        let tu = &Polynomial::var(&big, j) * &Polynomial::var(&big, d + j);
        gens.push(&tu - &Polynomial::one(&big));
    }
    let keep: Vec<usize> = (2 * d..2 * d + m.vars.len()).collect();
    let kernel = elim_ideal(&IdealGens::new(&big, gens)?, &keep, cfg)?;

    let ring = PolyRing::new(m.vars.clone(), Field::Rational, MonomialOrder::GrevLex)?;
    let relations = kernel
        .gens()
        .iter()
        .map(|p| p.embed(&ring))
        .collect::<Result<Vec<_>>>()?;
    let flags = AlgebraFlags {
        domain: true,
        factorial: relations.is_empty(),
    };
    let algebra = PresentedAlgebra::new(m.name.clone(), &ring, relations, flags)?;
    Ok(ToricPresentation {
        monoid: m.clone(),
        algebra,
    })
}

/// Images of the monoid generators in `Z^s x N^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionEmbedding {
    pub name: String,
    pub s: usize,
    pub k: usize,
    pub images: Vec<Vec<i64>>,
    /// User assertion that `M` is the intersection of its group with `N^k`.
    pub intersection_property: bool,
}

/// Rank of an integer matrix, by Gaussian elimination over the rationals.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| BigRational::from_integer(c.into())).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Mechanical checks on an embedding: shape, positivity of the last `k`
/// coordinates, and injectivity on the generated group.
pub fn verify_embedding(m: &AffineMonoid, e: &IntersectionEmbedding) -> Result<()> {
    if e.images.len() != m.generators.len() {
        return Err(Error::Monoid(format!(
            "embedding `{}` gives {} images for {} generators",
            e.name,
            e.images.len(),
            m.generators.len()
        )));
    }
    for (i, img) in e.images.iter().enumerate() {
        if img.len() != e.s + e.k {
            return Err(Error::Monoid(format!(
                "embedding `{}`: image {} has {} coordinates, expected {}",
                e.name,
                i + 1,
                img.len(),
                e.s + e.k
            )));
        }
        if img[e.s..].iter().any(|c| c.is_negative()) {
            return Err(Error::Monoid(format!(
                "embedding `{}`: image {} has a negative N-coordinate",
                e.name,
                i + 1
            )));
        }
    }
    let joined: Vec<Vec<i64>> = m
        .generators
        .iter()
        .zip(&e.images)
        .map(|(g, img)| g.iter().chain(img).copied().collect())
        .collect();
    let rg = integer_rank(&m.generators);
    let re = integer_rank(&e.images);
    let rj = integer_rank(&joined);
    if rg != re || re != rj {
        return Err(Error::Monoid(format!(
            "embedding `{}` is not injective on the group of `{}` (ranks {rg}, {re}, {rj})",
            e.name, m.name
        )));
    }
    Ok(())
}

/// The target `B = K[V_1..V_s, W_1..W_s, T_1..T_k] / (V_i W_i - 1)`.
pub fn extension_ring(s: usize, k: usize) -> Result<Arc<PresentedAlgebra>> {
    let mut names: Vec<String> = (1..=s).map(|i| format!("V{i}")).collect();
    names.extend((1..=s).map(|i| format!("W{i}")));
    names.extend((1..=k).map(|i| format!("T{i}")));
    let ring = PolyRing::new(names, Field::Rational, MonomialOrder::GrevLex)?;
    let relations = (0..s)
        .map(|i| &(&Polynomial::var(&ring, i) * &Polynomial::var(&ring, s + i)) - &Polynomial::one(&ring))
        .collect();
    PresentedAlgebra::new(
        "B",
        &ring,
        relations,
        AlgebraFlags {
            domain: true,
            factorial: true,
        },
    )
}

/// `K[M] -> B`, each generator going to the (Laurent) monomial of its image.
pub fn build_extension(
    t: &ToricPresentation,
    e: &IntersectionEmbedding,
    cfg: &GbConfig,
) -> Result<AlgebraMap> {
    verify_embedding(&t.monoid, e)?;
    let b = extension_ring(e.s, e.k)?;
    let ring = b.ring().clone();
    let one = Field::Rational.one();
    let images = e
        .images
        .iter()
        .map(|img| {
            let mut exps = vec![0u32; ring.arity()];
            for (i, &c) in img[..e.s].iter().enumerate() {
                if c >= 0 {
                    exps[i] = c as u32;
                } else {
                    exps[e.s + i] = (-c) as u32;
                }
            }
            for (j, &c) in img[e.s..].iter().enumerate() {
                exps[2 * e.s + j] = c as u32;
            }
            Polynomial::monomial(&ring, Monomial::new(exps), one.clone())
        })
        .collect();
    let phi = AlgebraMap::new(e.name.clone(), &t.algebra, &b, images)?;
    if let Some(rel) = phi.first_violation(cfg)? {
        return Err(Error::IllDefinedMap {
            map: e.name.clone(),
            relation: rel.to_string(),
        });
    }
    Ok(phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidOutcome {
    pub embedding: String,
    pub extended: String,
    pub bight_leq_one: bool,
    pub verdict: Verdict,
}

/// `D(a)` is affine iff the extension of `a` to `B` has big height at most
/// one. Refuses monoids not asserted normal and embeddings without the
/// intersection-property assertion.
pub fn monoid_affine(
    t: &ToricPresentation,
    e: &IntersectionEmbedding,
    a: &IdealInAlgebra,
    cfg: &GbConfig,
) -> Result<MonoidOutcome> {
    if !t.monoid.normal {
        return Err(Error::Monoid(format!(
            "`{}` is not asserted `normal`; normalization is not computed",
            t.monoid.name
        )));
    }
    if !e.intersection_property {
        return Err(Error::Monoid(format!(
            "embedding `{}` lacks the `intersection-property` assertion",
            e.name
        )));
    }
    let phi = build_extension(t, e, cfg)?;
    let ext = extend_ideal(&phi, a, cfg)?;
    let ok = bight_leq_one(phi.target(), &ext, cfg)?;
    Ok(MonoidOutcome {
        embedding: e.name.clone(),
        extended: ext.to_string(),
        bight_leq_one: ok,
        verdict: if ok { Verdict::Affine } else { Verdict::NotAffine },
    })
}

/// Evaluates the monomial map `x_i -> t^{g_i}` on `f` as a map from
/// exponent vectors in `Z^d` to coefficients; empty iff `f` is in the kernel.
pub fn monomial_image(m: &AffineMonoid, f: &Polynomial) -> Vec<(Vec<i64>, BigRational)> {
    let mut acc: Vec<(Vec<i64>, BigRational)> = Vec::new();
    for (mono, c) in f.terms() {
        let mut e = vec![0i64; m.rank];
        for (i, &x) in mono.exponents().iter().enumerate() {
            for (j, &g) in m.generators[i].iter().enumerate() {
                e[j] += g * x as i64;
            }
        }
        let c = c.as_rational().expect("rational coefficients").clone();
        match acc.iter_mut().find(|(k, _)| *k == e) {
            Some((_, v)) => *v += c,
            None => acc.push((e, c)),
        }
    }
    acc.retain(|(_, v)| !v.is_zero());
    acc.sort();
    acc
}
