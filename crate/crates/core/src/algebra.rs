//! Finitely presented algebras `K[x]/I`, maps between them given by
//! generator images, ideal extension, and height computations.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{
    groebner_basis, ideal_dimension, is_unit_ideal, radical_member, GbConfig, GroebnerBasis,
    IdealGens,
};
use crate::polycore::{poly_gcd_all, Monomial, MonomialOrder, PolyRing, Polynomial};

/// User assertions attached to an algebra. Neither is verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AlgebraFlags {
    pub domain: bool,
    pub factorial: bool,
}

/// `A = K[x_1..x_n]/I`.
#[derive(Debug)]
pub struct PresentedAlgebra {
    name: String,
    ring: Arc<PolyRing>,
    ideal: IdealGens,
    flags: AlgebraFlags,
    /// `(V, W)` variable pairs with `V*W - 1` in `I`, for Laurent presentations.
    laurent: Vec<(usize, usize)>,
    basis: OnceLock<GroebnerBasis>,
    dim: OnceLock<i64>,
}

/// Recognizes `V*W - 1` (up to a scalar) and returns the variable pair.
fn laurent_pair(p: &Polynomial) -> Option<(usize, usize)> {
    let p = p.monic();
    if p.len() != 2 {
        return None;
    }
    let (m, c) = &p.terms()[0];
    let (m0, c0) = &p.terms()[1];
    if !c.is_one() || !m0.is_one() || !c0.neg().is_one() {
        return None;
    }
    let vars: Vec<usize> = m.support().collect();
    match vars.as_slice() {
        [a, b] if m.exponents()[*a] == 1 && m.exponents()[*b] == 1 => Some((*a, *b)),
        _ => None,
    }
}

impl PresentedAlgebra {
    /// Builds `ring / (relations)`. The ring is switched to graded reverse lex
    /// so that normal forms of representatives are canonical. A `factorial`
    /// assertion is only accepted for polynomial rings and Laurent
    /// presentations `K[V, W, T]/(V_i W_i - 1)`.
    pub fn new(
        name: impl Into<String>,
        ring: &Arc<PolyRing>,
        relations: Vec<Polynomial>,
        flags: AlgebraFlags,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let ring = if ring.order() == MonomialOrder::GrevLex {
            ring.clone()
        } else {
            ring.with_order(MonomialOrder::GrevLex)
        };
        let relations = relations
            .into_iter()
            .map(|p| {
                if p.ring().vars() == ring.vars() && p.ring().field() == ring.field() {
                    Ok(p.with_order(&ring))
                } else {
                    Err(Error::RingMismatch)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ideal = IdealGens::new(&ring, relations)?;
        let mut laurent = Vec::new();
        if flags.factorial {
            let mut used = vec![false; ring.arity()];
            for g in ideal.gens() {
                let Some((a, b)) = laurent_pair(g) else {
                    return Err(Error::NotFactorial(format!(
                        "`{name}`: relation {g} is not of the form V*W - 1"
                    )));
                };
                if used[a] || used[b] {
                    return Err(Error::NotFactorial(format!(
                        "`{name}`: Laurent pairs must use disjoint variables"
                    )));
                }
                used[a] = true;
                used[b] = true;
                laurent.push((a, b));
            }
        }
        Ok(Arc::new(PresentedAlgebra {
            name,
            ring,
            ideal,
            flags,
            laurent,
            basis: OnceLock::new(),
            dim: OnceLock::new(),
        }))
    }

    /// The polynomial ring itself, asserted domain and factorial.
    pub fn polynomial(name: impl Into<String>, ring: &Arc<PolyRing>) -> Result<Arc<Self>> {
        Self::new(
            name,
            ring,
            Vec::new(),
            AlgebraFlags {
                domain: true,
                factorial: true,
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealGens {
        &self.ideal
    }

    pub fn flags(&self) -> AlgebraFlags {
        self.flags
    }

    pub fn is_domain(&self) -> bool {
        self.flags.domain
    }

    pub fn is_factorial_ambient(&self) -> bool {
        self.flags.factorial
    }

    pub fn laurent_pairs(&self) -> &[(usize, usize)] {
        &self.laurent
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || (a.ring == b.ring && a.ideal == b.ideal && a.flags == b.flags)
    }

    /// Reduced graded reverse lex basis of the defining ideal (cached).
    pub fn basis(&self, cfg: &GbConfig) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.basis.get() {
            return Ok(gb);
        }
        let gb = groebner_basis(&self.ideal, MonomialOrder::GrevLex, cfg)?;
        Ok(self.basis.get_or_init(|| gb))
    }

    /// Canonical representative of `f` modulo the defining ideal.
    pub fn reduce(&self, f: &Polynomial, cfg: &GbConfig) -> Result<Polynomial> {
        if !PolyRing::same(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.basis(cfg)?.reduce(f))
    }

    /// Whether `f` is zero in the algebra.
    pub fn is_zero_element(&self, f: &Polynomial, cfg: &GbConfig) -> Result<bool> {
        Ok(self.reduce(f, cfg)?.is_zero())
    }

    pub fn is_zero_ring(&self, cfg: &GbConfig) -> Result<bool> {
        Ok(self.basis(cfg)?.is_unit())
    }

    pub fn parse_var(&self, name: &str) -> Option<Polynomial> {
        self.ring.var_index(name).map(|i| Polynomial::var(&self.ring, i))
    }
}

impl fmt::Display for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.ring, self.ideal)
    }
}

/// Krull dimension of the algebra; `-1` for the zero ring.
pub fn algebra_dimension(a: &PresentedAlgebra, cfg: &GbConfig) -> Result<i64> {
    if let Some(d) = a.dim.get() {
        return Ok(*d);
    }
    let d = ideal_dimension(&a.ideal, cfg)?;
    Ok(*a.dim.get_or_init(|| d))
}

/// A homomorphism `source -> target` given by the image of each source
/// variable.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    name: String,
    source: Arc<PresentedAlgebra>,
    target: Arc<PresentedAlgebra>,
    images: Vec<Polynomial>,
}

impl AlgebraMap {
    /// Checks arities and rings only; well-definedness is `check_map`.
    pub fn new(
        name: impl Into<String>,
        source: &Arc<PresentedAlgebra>,
        target: &Arc<PresentedAlgebra>,
        images: Vec<Polynomial>,
    ) -> Result<Self> {
        if images.len() != source.ring().arity() {
            return Err(Error::ArityMismatch {
                expected: source.ring().arity(),
                found: images.len(),
            });
        }
        let images = images
            .into_iter()
            .map(|p| {
                if p.ring().vars() == target.ring().vars()
                    && p.ring().field() == target.ring().field()
                {
                    Ok(p.with_order(target.ring()))
                } else {
                    Err(Error::RingMismatch)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if source.ring().field() != target.ring().field() {
            return Err(Error::RingMismatch);
        }
        Ok(AlgebraMap {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(a: &Arc<PresentedAlgebra>) -> Self {
        let images = (0..a.ring().arity())
            .map(|i| Polynomial::var(a.ring(), i))
            .collect();
        AlgebraMap {
            name: format!("id_{}", a.name()),
            source: a.clone(),
            target: a.clone(),
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<PresentedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Image of an ambient representative, not yet reduced.
    pub fn apply_raw(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.images, self.target.ring())
    }

    /// Image of `f`, reduced modulo the target's defining ideal.
    pub fn apply(&self, f: &Polynomial, cfg: &GbConfig) -> Result<Polynomial> {
        self.target.reduce(&self.apply_raw(f)?, cfg)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraMap) -> Result<AlgebraMap> {
        if !PresentedAlgebra::same(&self.target, &other.source) {
            return Err(Error::SourceMismatch(format!(
                "cannot compose `{}` with `{}`",
                self.name, other.name
            )));
        }
        let images = self
            .images
            .iter()
            .map(|p| other.apply_raw(p))
            .collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(
            format!("{}.{}", other.name, self.name),
            &self.source,
            &other.target,
            images,
        )
    }

    /// First defining relation of the source whose image is nonzero in the
    /// target, if any.
    pub fn first_violation(&self, cfg: &GbConfig) -> Result<Option<Polynomial>> {
        for r in self.source.ideal().gens() {
            if !self.target.is_zero_element(&self.apply_raw(r)?, cfg)? {
                return Ok(Some(r.clone()));
            }
        }
        Ok(None)
    }
}

/// Whether every defining relation of the source maps into the target's
/// defining ideal.
pub fn check_map(phi: &AlgebraMap, cfg: &GbConfig) -> Result<bool> {
    Ok(phi.first_violation(cfg)?.is_none())
}

/// An ideal of a presented algebra, stored by reduced ambient
/// representatives (zero representatives dropped).
#[derive(Clone, Debug)]
pub struct IdealInAlgebra {
    algebra: Arc<PresentedAlgebra>,
    gens: Vec<Polynomial>,
}

impl IdealInAlgebra {
    pub fn new(
        algebra: &Arc<PresentedAlgebra>,
        gens: Vec<Polynomial>,
        cfg: &GbConfig,
    ) -> Result<Self> {
        let gens = gens
            .into_iter()
            .map(|g| {
                let g = if g.ring().vars() == algebra.ring().vars() {
                    g.with_order(algebra.ring())
                } else {
                    return Err(Error::RingMismatch);
                };
                algebra.reduce(&g, cfg)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        Ok(IdealInAlgebra {
            algebra: algebra.clone(),
            gens,
        })
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `I + a` in the ambient polynomial ring.
    pub fn lift(&self) -> Result<IdealGens> {
        self.algebra.ideal().with(self.gens.iter().cloned())
    }

    pub fn is_unit(&self, cfg: &GbConfig) -> Result<bool> {
        is_unit_ideal(&self.lift()?, cfg)
    }
}

impl fmt::Display for IdealInAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// The extended ideal `a·A'` along `phi: A -> A'`.
pub fn extend_ideal(
    phi: &AlgebraMap,
    a: &IdealInAlgebra,
    cfg: &GbConfig,
) -> Result<IdealInAlgebra> {
    if !PresentedAlgebra::same(phi.source(), a.algebra()) {
        return Err(Error::SourceMismatch(format!(
            "ideal lives in `{}`, map `{}` starts at `{}`",
            a.algebra().name(),
            phi.name(),
            phi.source().name()
        )));
    }
    let images = a
        .gens()
        .iter()
        .map(|g| phi.apply_raw(g))
        .collect::<Result<Vec<_>>>()?;
    IdealInAlgebra::new(phi.target(), images, cfg)
}

/// Height of `a` in the domain `A`: `dim A - dim A/a`, with `ht(A) = 1` for
/// the unit ideal of a nonzero algebra and `0` in the zero ring.
pub fn ideal_height(
    algebra: &PresentedAlgebra,
    a: &IdealInAlgebra,
    cfg: &GbConfig,
) -> Result<i64> {
    if !algebra.is_domain() {
        return Err(Error::NotDomain(algebra.name().to_string()));
    }
    if algebra.ring() != a.algebra().ring() || algebra.ideal() != a.algebra().ideal() {
        return Err(Error::SourceMismatch(format!(
            "ideal does not live in `{}`",
            algebra.name()
        )));
    }
    if algebra.is_zero_ring(cfg)? {
        return Ok(0);
    }
    let quotient = ideal_dimension(&a.lift()?, cfg)?;
    if quotient < 0 {
        return Ok(1);
    }
    Ok(algebra_dimension(algebra, cfg)? - quotient)
}

/// Rewrites a Laurent-ring representative as a polynomial free of the
/// inverse variables `W_i` and of monomial factors in the `V_i`.
fn clear_laurent(f: &Polynomial, pairs: &[(usize, usize)]) -> Polynomial {
    let ring = f.ring();
    let exps: Vec<Vec<i64>> = f
        .terms()
        .iter()
        .map(|(m, _)| {
            let mut e: Vec<i64> = m.exponents().iter().map(|&x| x as i64).collect();
            for &(v, w) in pairs {
                e[v] -= e[w];
                e[w] = 0;
            }
            e
        })
        .collect();
    let mut shift = vec![0i64; ring.arity()];
    for &(v, _) in pairs {
        shift[v] = exps.iter().map(|e| e[v]).min().unwrap_or(0);
    }
    let terms = exps.into_iter().zip(f.terms()).map(|(e, (_, c))| {
        let m = e
            .iter()
            .zip(&shift)
            .map(|(x, s)| (x - s) as u32)
            .collect();
        (Monomial::new(m), c.clone())
    });
    let p = Polynomial::from_terms(ring, terms);
    let content = p.monomial_content();
    let laurent_part: Vec<u32> = content
        .exponents()
        .iter()
        .enumerate()
        .map(|(i, &x)| if pairs.iter().any(|&(v, _)| v == i) { x } else { 0 })
        .collect();
    p.div_monomial(&Monomial::new(laurent_part))
        .expect("monomial content divides")
}

/// Decides `bight(a) <= 1` in a factorial ambient (a polynomial or Laurent
/// polynomial ring): with `g` the gcd of the generators (Laurent monomials
/// stripped), every height-one minimal prime of `a` is generated by a factor
/// of `g`, so all minimal primes have height one exactly when
/// `V(a) ⊆ V(g)`, i.e. `g ∈ rad(a)`.
pub fn bight_leq_one(
    algebra: &PresentedAlgebra,
    a: &IdealInAlgebra,
    cfg: &GbConfig,
) -> Result<bool> {
    if !algebra.is_factorial_ambient() {
        return Err(Error::NotFactorial(format!(
            "`{}` is not asserted `factorial`",
            algebra.name()
        )));
    }
    if !algebra.ring().field().is_rational() {
        return Err(Error::UnsupportedField(
            "big-height test needs rational coefficients".into(),
        ));
    }
    if a.is_zero() || a.is_unit(cfg)? {
        return Ok(true);
    }
    let cleared: Vec<Polynomial> = a
        .gens()
        .iter()
        .map(|g| clear_laurent(g, algebra.laurent_pairs()))
        .collect();
    let g = poly_gcd_all(algebra.ring(), cleared.iter())?;
    radical_member(&g, &a.lift()?, cfg)
}
