use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polycore::{Field, Monomial, MonomialOrder, PolyRing, Scalar};

pub type Term = (Monomial, Scalar);

/// Sparse polynomial: terms sorted strictly descending in the ring's order,
/// no zero coefficients. The zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        PolyRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn merge(order: MonomialOrder, a: &[Term], b: impl Iterator<Item = Term>) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + 4);
    let mut ia = a.iter().peekable();
    let mut ib = b.peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some((ma, _)), Some((mb, _))) => order.cmp(ma, mb),
        };
        match ord {
            Ordering::Greater => out.push(ia.next().unwrap().clone()),
            Ordering::Less => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m, ca) = ia.next().unwrap();
                let (_, cb) = ib.next().unwrap();
                let c = ca.add(&cb);
                if !c.is_zero() {
                    out.push((m.clone(), c));
                }
            }
        }
    }
    out
}

fn merge_ascending(order: MonomialOrder, a: &[Term], b: impl Iterator<Item = Term>) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + 4);
    let mut ia = a.iter().peekable();
    let mut ib = b.peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some((ma, _)), Some((mb, _))) => order.cmp(ma, mb),
        };
        match ord {
            Ordering::Less => out.push(ia.next().unwrap().clone()),
            Ordering::Greater => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m, ca) = ia.next().unwrap();
                let (_, cb) = ib.next().unwrap();
                let c = ca.add(&cb);
                if !c.is_zero() {
                    out.push((m.clone(), c));
                }
            }
        }
    }
    out
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Self {
        Self::monomial(ring, Monomial::one(ring.arity()), c)
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.arity(), index), ring.field().one())
    }

    /// The variable with the given name; panics if absent.
    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring
            .var_index(name)
            .unwrap_or_else(|| panic!("no variable `{name}` in {ring}"));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.arity(), ring.arity(), "monomial arity");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary terms (any order,
    /// repeated monomials, zero coefficients allowed).
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), ring.arity(), "monomial arity");
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<PolyRing>, acc: HashMap<Monomial, Scalar>) -> Self {
        let order = ring.order();
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let p = Polynomial {
            ring: ring.clone(),
            terms,
        };
        debug_assert!(p.is_canonical());
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Variables occurring in some term.
    pub fn support(&self) -> Vec<bool> {
        let mut used = vec![false; self.ring.arity()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used
    }

    /// Checks the canonical-form invariant: strictly descending monomials,
    /// no zero coefficients, arity and field consistent with the ring.
    pub fn is_canonical(&self) -> bool {
        let order = self.ring.order();
        let field = self.ring.field();
        self.terms
            .iter()
            .all(|(m, c)| m.arity() == self.ring.arity() && !c.is_zero() && c.field() == field)
            && self
                .terms
                .windows(2)
                .all(|w| order.cmp(&w[0].0, &w[1].0) == Ordering::Greater)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if PolyRing::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Polynomial) -> Polynomial {
        let terms = merge(self.ring.order(), &self.terms, other.terms.iter().cloned());
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    fn neg_ref(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(&self.ring, acc)
    }

    /// Multiplies by a single term; monomial orders are multiplicative so the
    /// term order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.mul(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.arity()), c)
    }

    /// `self - c * m * g`, the elementary reduction step.
    pub fn sub_mul_term(&self, c: &Scalar, m: &Monomial, g: &Polynomial) -> Polynomial {
        let neg = c.neg();
        let terms = merge(
            self.ring.order(),
            &self.terms,
            g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc.mul(&neg))),
        );
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Full reduction (every term, not just the leading one) by `divisors`,
    /// trying them in the given order. The result has no term divisible by
    /// the leading monomial of any divisor.
    pub fn reduce_full(&self, divisors: &[&Polynomial]) -> Polynomial {
        if divisors.is_empty() || self.is_zero() {
            return self.clone();
        }
        let order = self.ring.order();
        let leads: Vec<(&Monomial, Scalar)> = divisors
            .iter()
            .map(|g| {
                let (m, c) = g.leading_term().expect("nonzero divisor");
                (m, c.inv().expect("nonzero leading coefficient"))
            })
            .collect();
        // ascending order so the current leading term sits at the end
        let mut work: Vec<Term> = self.terms.iter().rev().cloned().collect();
        let mut rem: Vec<Term> = Vec::new();
        while let Some((m, c)) = work.pop() {
            let hit = leads.iter().position(|(lm, _)| lm.divides(&m));
            match hit {
                None => rem.push((m, c)),
                Some(k) => {
                    let g = divisors[k];
                    let q = leads[k].0.quotient_of(&m).unwrap();
                    let factor = c.mul(&leads[k].1).neg();
                    let tail = g.terms[1..]
                        .iter()
                        .rev()
                        .map(|(gm, gc)| (gm.mul(&q), gc.mul(&factor)));
                    work = merge_ascending(order, &work, tail);
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: rem,
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Re-sorts into a ring with the same variables and field but another order.
    pub fn with_order(&self, ring: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(ring.vars(), self.ring.vars(), "reorder needs equal variables");
        let order = ring.order();
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Moves into `target`, sending variable `i` to `target` variable
    /// `var_map[i]`.
    pub fn map_vars(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.arity());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; target.arity()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[var_map[i]] += x;
            }
            (Monomial::new(e), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Moves into a ring whose variables include all of ours, matched by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Polynomial> {
        if target.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        let var_map = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v).ok_or(Error::RingMismatch))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.map_vars(target, &var_map))
    }

    /// Like `embed`, but only variables that actually occur need to exist in
    /// the target.
    pub fn restrict(&self, target: &Arc<PolyRing>) -> Result<Polynomial> {
        if target.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        let used = self.support();
        let mut var_map = vec![0; self.ring.arity()];
        for (i, v) in self.ring.vars().iter().enumerate() {
            match target.var_index(v) {
                Some(j) => var_map[i] = j,
                None if !used[i] => {}
                None => return Err(Error::RingMismatch),
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; target.arity()];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    e[var_map[i]] += x;
                }
            }
            (Monomial::new(e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Evaluates the algebra homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<PolyRing>) -> Result<Polynomial> {
        if images.len() != self.ring.arity() {
            return Err(Error::ArityMismatch {
                expected: self.ring.arity(),
                found: images.len(),
            });
        }
        if target.field() != self.ring.field()
            || images.iter().any(|p| !PolyRing::same(p.ring(), target))
        {
            return Err(Error::RingMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_unchecked(&cache[1]);
                    cache.push(next);
                }
                t = t.mul_unchecked(&cache[e as usize]);
            }
            acc = acc.add_unchecked(&t);
        }
        Ok(acc)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponents()[var])
            .max()
            .unwrap_or(0)
    }

    /// Coefficients with respect to `var`: entry `d` is the coefficient of
    /// `var^d`, a polynomial in the same ring not involving `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            let d = e[var] as usize;
            e[var] = 0;
            buckets[d].push((Monomial::new(e), c.clone()));
        }
        // zeroing an exponent can change relative order under grevlex
        buckets
            .into_iter()
            .map(|t| Polynomial::from_terms(&self.ring, t))
            .collect()
    }

    /// Exact division: `Some(q)` with `self = q * g`, `None` otherwise.
    pub fn div_exact(&self, g: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_ring(g)?;
        let (lm, lc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let Some(q) = lm.quotient_of(m) else {
                return Ok(None);
            };
            let qc = c.mul(&lc_inv);
            rem = rem.sub_mul_term(&qc, &q, g);
            quot.push((q, qc));
        }
        Ok(Some(Polynomial {
            ring: self.ring.clone(),
            terms: quot,
        }))
    }

    /// The largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.ring.arity()),
            Some((m, _)) => it.fold(m.clone(), |acc, (m, _)| acc.gcd(m)),
        }
    }

    /// Divides out a monomial factor of every term.
    pub fn div_monomial(&self, d: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| d.quotient_of(m).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Over the rationals: the unique associate with coprime integer
    /// coefficients and positive leading coefficient. Over a prime field:
    /// the monic associate.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        match self.ring.field() {
            Field::Prime(_) => self.monic(),
            Field::Rational => {
                let mut den = BigInt::one();
                let mut num = BigInt::zero();
                for (_, c) in &self.terms {
                    let q = c.as_rational().expect("rational coefficient");
                    den = den.lcm(q.denom());
                    num = num.gcd(q.numer());
                }
                let mut factor = BigRational::new(den, num);
                if self.terms[0].1.is_negative() {
                    factor = -factor;
                }
                self.scale(&Scalar::Rational(factor))
            }
        }
    }

    /// Integer content of a polynomial with rational coefficients, as a
    /// positive rational `c` with `self = c * self.primitive()` up to sign.
    pub fn content(&self) -> Option<BigRational> {
        if self.is_zero() || !self.ring.field().is_rational() {
            return None;
        }
        let p = self.primitive();
        let a = self.terms[0].1.as_rational()?;
        let b = p.terms[0].1.as_rational()?;
        Some((a / b).abs())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

/// Product of two polynomials in the same ring.
pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.checked_mul(g)
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", vars[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(f, vars, m)?;
            }
        }
        Ok(())
    }
}
