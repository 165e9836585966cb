use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, GbConfig, IdealGens};
use crate::polycore::{Field, MonomialOrder, PolyRing, Polynomial};

fn reduce_mod_p(f: &Polynomial, target: &Arc<PolyRing>) -> Option<Polynomial> {
    let field = target.field();
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| Some((m.clone(), field.from_rational(c.as_rational()?)?)))
        .collect::<Option<Vec<_>>>()?;
    Some(Polynomial::from_terms(target, terms))
}

/// Advisory modular membership test; `None` when it cannot be run (bad
/// reduction or the cap was hit).
fn prefilter_member(f: &Polynomial, g: &IdealGens, p: u32, cfg: &GbConfig) -> Option<bool> {
    if !g.ring().field().is_rational() {
        return None;
    }
    let field = Field::prime(p).ok()?;
    let ring = PolyRing::new(g.ring().vars().to_vec(), field, MonomialOrder::GrevLex).ok()?;
    let gens = g
        .gens()
        .iter()
        .map(|h| reduce_mod_p(h, &ring))
        .collect::<Option<Vec<_>>>()?;
    let fp = reduce_mod_p(f, &ring)?;
    let quiet = GbConfig {
        prefilter: None,
        stats: Default::default(),
        ..cfg.clone()
    };
    let gb = groebner_basis(&IdealGens::new(&ring, gens).ok()?, MonomialOrder::GrevLex, &quiet).ok()?;
    Some(gb.contains(&fp))
}

/// `f ∈ (g)`, decided by normal form against a graded reverse lex basis.
pub fn ideal_member(f: &Polynomial, g: &IdealGens, cfg: &GbConfig) -> Result<bool> {
    if !PolyRing::same(f.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let gb = groebner_basis(g, MonomialOrder::GrevLex, cfg)?;
    let member = gb.contains(&f.with_order(gb.ring()));
    if let Some(p) = cfg.prefilter {
        let advisory = prefilter_member(f, g, p, cfg);
        cfg.stats.record_prefilter(advisory.map(|a| a == member));
    }
    Ok(member)
}

pub fn is_unit_ideal(g: &IdealGens, cfg: &GbConfig) -> Result<bool> {
    Ok(groebner_basis(g, MonomialOrder::GrevLex, cfg)?.is_unit())
}

/// `f ∈ rad(g)`: adjoin a fresh variable `y` and test `1 ∈ (g, 1 - y f)`.
pub fn radical_member(f: &Polynomial, g: &IdealGens, cfg: &GbConfig) -> Result<bool> {
    if !PolyRing::same(f.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let ring = g.ring();
    let y = ring.fresh_name("y");
    let mut vars = ring.vars().to_vec();
    vars.push(y);
    let ext = PolyRing::new(vars, ring.field(), MonomialOrder::GrevLex)?;
    let yv = Polynomial::var(&ext, ring.arity());
    let rabinowitsch = &Polynomial::one(&ext) - &(&yv * &f.embed(&ext)?);
    let gens = g.embed(&ext)?.with([rabinowitsch])?;
    is_unit_ideal(&gens, cfg)
}

/// Generators of `(g) ∩ K[keep]`, living in the ring on the kept variables
/// (in their original relative order).
pub fn elim_ideal(g: &IdealGens, keep: &[usize], cfg: &GbConfig) -> Result<IdealGens> {
    let ring = g.ring();
    let n = ring.arity();
    if keep.iter().any(|&i| i >= n) {
        return Err(Error::InvalidInput("kept variable out of range".into()));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let elim: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();

    let sub_order = match ring.order() {
        MonomialOrder::Block(_) => MonomialOrder::GrevLex,
        o => o,
    };
    let sub = PolyRing::new(
        keep_sorted.iter().map(|&i| ring.vars()[i].clone()),
        ring.field(),
        sub_order,
    )?;

    // eliminated variables first, under a block order
    let order: Vec<usize> = elim.iter().chain(keep_sorted.iter()).copied().collect();
    let block = PolyRing::new(
        order.iter().map(|&i| ring.vars()[i].clone()),
        ring.field(),
        MonomialOrder::Block(elim.len()),
    )?;
    let mut var_map = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        var_map[i] = pos;
    }
    let moved = g
        .gens()
        .iter()
        .map(|p| p.map_vars(&block, &var_map))
        .collect();
    let gb = groebner_basis(
        &IdealGens::new(&block, moved)?,
        MonomialOrder::Block(elim.len()),
        cfg,
    )?;
    let k = elim.len();
    let kept = gb
        .polys()
        .iter()
        .filter(|p| p.support()[..k].iter().all(|u| !u))
        .map(|p| p.restrict(&sub))
        .collect::<Result<Vec<_>>>()?;
    IdealGens::new(&sub, kept)
}

/// Elimination with the kept variables given by name.
pub fn elim_ideal_by_name(g: &IdealGens, keep: &[&str], cfg: &GbConfig) -> Result<IdealGens> {
    let idx = keep
        .iter()
        .map(|v| {
            g.ring()
                .var_index(v)
                .ok_or_else(|| Error::InvalidInput(format!("unknown variable `{v}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    elim_ideal(g, &idx, cfg)
}

/// Generators of the saturation `(g) : f^∞`, computed as
/// `(g, 1 - y f) ∩ K[x]` and returned in `g`'s ring.
pub fn saturate(g: &IdealGens, f: &Polynomial, cfg: &GbConfig) -> Result<IdealGens> {
    let ring = g.ring();
    if !PolyRing::same(f.ring(), ring) {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot saturate by zero".into()));
    }
    if f.is_constant() {
        return groebner_basis(g, ring.order(), cfg).map(|gb| gb.to_gens());
    }
    let y = ring.fresh_name("y");
    let mut vars = vec![y];
    vars.extend(ring.vars().iter().cloned());
    let ext = PolyRing::new(vars, ring.field(), MonomialOrder::GrevLex)?;
    let yv = Polynomial::var(&ext, 0);
    let rabinowitsch = &Polynomial::one(&ext) - &(&yv * &f.embed(&ext)?);
    let gens = g.embed(&ext)?.with([rabinowitsch])?;
    let keep: Vec<usize> = (1..ext.arity()).collect();
    let eliminated = elim_ideal(&gens, &keep, cfg)?;
    eliminated.embed(ring)
}

/// Krull dimension of `K[x]/(g)`; `-1` for the unit ideal. Computed as the
/// largest set of variables containing the support of no leading monomial
/// of a graded reverse lex basis.
pub fn ideal_dimension(g: &IdealGens, cfg: &GbConfig) -> Result<i64> {
    let gb = groebner_basis(g, MonomialOrder::GrevLex, cfg)?;
    if gb.is_unit() {
        return Ok(-1);
    }
    let n = g.ring().arity();
    let supports: Vec<Vec<usize>> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.support().collect())
        .collect();
    let mut chosen = vec![false; n];
    let mut best = 0usize;
    max_independent(0, 0, &mut chosen, &supports, &mut best);
    Ok(best as i64)
}

fn max_independent(
    next: usize,
    size: usize,
    chosen: &mut Vec<bool>,
    supports: &[Vec<usize>],
    best: &mut usize,
) {
    let n = chosen.len();
    if size + (n - next) <= *best {
        return;
    }
    if next == n {
        *best = size;
        return;
    }
    chosen[next] = true;
    let ok = supports
        .iter()
        .all(|s| !s.iter().all(|&i| chosen[i]));
    if ok {
        max_independent(next + 1, size + 1, chosen, supports, best);
    }
    chosen[next] = false;
    max_independent(next + 1, size, chosen, supports, best);
}
