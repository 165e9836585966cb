use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{GbConfig, IdealGens};
use crate::polycore::{Monomial, MonomialOrder, PolyRing, Polynomial};

/// A reduced Groebner basis with respect to the order recorded in its ring.
/// Elements are monic and sorted by descending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    polys: Vec<Polynomial>,
    leads: Vec<Monomial>,
    spairs_reduced: u64,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    /// S-pair reductions performed while computing this basis.
    pub fn spairs_reduced(&self) -> u64 {
        self.spairs_reduced
    }

    pub fn to_gens(&self) -> IdealGens {
        IdealGens::new(&self.ring, self.polys.clone()).expect("basis lives in its ring")
    }

    /// Normal form of a polynomial already living in this basis' ring.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let divisors: Vec<&Polynomial> = self.polys.iter().collect();
        f.reduce_full(&divisors)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }
}

/// The unique remainder of `f` modulo `gb`.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    if f.ring().vars() != gb.ring.vars() || f.ring().field() != gb.ring.field() {
        return Err(Error::RingMismatch);
    }
    if f.ring().order() != gb.order() {
        return Err(Error::OrderMismatch);
    }
    Ok(gb.reduce(f))
}

/// `lcm/lt(f) * f - lcm/lt(g) * g` for monic-or-not `f`, `g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let lcm = mf.lcm(mg);
    let qf = mf.quotient_of(&lcm).unwrap();
    let qg = mg.quotient_of(&lcm).unwrap();
    let a = f.mul_term(&qf, &cf.inv().unwrap());
    a.sub_mul_term(&cg.inv().unwrap(), &qg, g)
}

struct Entry {
    poly: Polynomial,
    lead: Monomial,
    sugar: u32,
    active: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Builder<'a> {
    order: MonomialOrder,
    entries: Vec<Entry>,
    pairs: Vec<Pair>,
    cfg: &'a GbConfig,
    reductions: u64,
}

impl Builder<'_> {
    fn active_divisors(&self) -> Vec<&Polynomial> {
        self.entries
            .iter()
            .filter(|e| e.active)
            .map(|e| &e.poly)
            .collect()
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let d = lcm.degree();
        let a = &self.entries[i];
        let b = &self.entries[j];
        (a.sugar + d - a.lead.degree()).max(b.sugar + d - b.lead.degree())
    }

    /// Gebauer-Moeller update for a new basis element `h`.
    fn insert(&mut self, h: Polynomial, sugar: u32) {
        let lead_h = h.leading_monomial().expect("nonzero").clone();
        let t = self.entries.len();

        let candidates: Vec<(usize, Monomial)> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.active)
            .map(|(i, e)| (i, e.lead.lcm(&lead_h)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (pos, (g1, lcm1)) in candidates.iter().enumerate() {
            let coprime = self.entries[*g1].lead.is_coprime(&lead_h);
            let dominated = candidates[pos + 1..]
                .iter()
                .chain(kept.iter())
                .any(|(_, lcm2)| lcm2.divides(lcm1));
            if coprime || !dominated {
                kept.push((*g1, lcm1.clone()));
            }
        }
        kept.retain(|(g, _)| !self.entries[*g].lead.is_coprime(&lead_h));

        let entries = &self.entries;
        self.pairs.retain(|p| {
            if !lead_h.divides(&p.lcm) {
                return true;
            }
            let li = entries[p.i].lead.lcm(&lead_h);
            let lj = entries[p.j].lead.lcm(&lead_h);
            li == p.lcm || lj == p.lcm
        });

        for e in self.entries.iter_mut().filter(|e| e.active) {
            if lead_h.divides(&e.lead) {
                e.active = false;
            }
        }
        self.entries.push(Entry {
            poly: h,
            lead: lead_h,
            sugar,
            active: true,
        });
        for (g, lcm) in kept {
            let s = self.pair_sugar(g, t, &lcm);
            self.pairs.push(Pair {
                i: g,
                j: t,
                lcm,
                sugar: s,
            });
        }
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
                    .then_with(|| a.j.cmp(&b.j))
                    .then_with(|| a.i.cmp(&b.i))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

fn unit_basis(ring: &Arc<PolyRing>, spairs_reduced: u64) -> GroebnerBasis {
    GroebnerBasis {
        ring: ring.clone(),
        polys: vec![Polynomial::one(ring)],
        leads: vec![Monomial::one(ring.arity())],
        spairs_reduced,
    }
}

/// Reduced Groebner basis of the ideal generated by `g` with respect to
/// `order`. Buchberger's algorithm with Gebauer-Moeller pair elimination and
/// sugar selection; fails with `ComputationTooLarge` once the configured
/// number of S-pair reductions is exceeded.
pub fn groebner_basis(
    g: &IdealGens,
    order: MonomialOrder,
    cfg: &GbConfig,
) -> Result<GroebnerBasis> {
    let ring = if g.ring().order() == order {
        g.ring().clone()
    } else {
        g.ring().with_order(order)
    };
    cfg.stats.record_basis();

    let mut b = Builder {
        order,
        entries: Vec::new(),
        pairs: Vec::new(),
        cfg,
        reductions: 0,
    };

    for f in g.gens() {
        let f = f.with_order(&ring);
        let h = f.reduce_full(&b.active_divisors());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&ring, 0));
        }
        let sugar = f.total_degree().unwrap_or(0);
        b.insert(h.monic(), sugar);
    }

    while let Some(pair) = b.select() {
        b.reductions += 1;
        b.cfg.stats.record_spair();
        if b.reductions > b.cfg.max_spairs {
            return Err(Error::ComputationTooLarge {
                limit: b.cfg.max_spairs,
            });
        }
        let s = s_polynomial(&b.entries[pair.i].poly, &b.entries[pair.j].poly);
        let h = s.reduce_full(&b.active_divisors());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&ring, b.reductions));
        }
        b.insert(h.monic(), pair.sugar);
    }

    let mut basis: Vec<Polynomial> = b
        .entries
        .into_iter()
        .filter(|e| e.active)
        .map(|e| e.poly)
        .collect();
    // interreduce
    for k in 0..basis.len() {
        let others: Vec<&Polynomial> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p)
            .collect();
        let r = basis[k].reduce_full(&others).monic();
        basis[k] = r;
    }
    basis.sort_by(|p, q| {
        order
            .cmp(q.leading_monomial().unwrap(), p.leading_monomial().unwrap())
            .then(Ordering::Equal)
    });
    let leads = basis
        .iter()
        .map(|p| p.leading_monomial().unwrap().clone())
        .collect();
    Ok(GroebnerBasis {
        ring,
        polys: basis,
        leads,
        spairs_reduced: b.reductions,
    })
}
