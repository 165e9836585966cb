//! Name resolution: turns a parsed session into algebraic objects.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::ast::*;
use crate::algebra::{AlgebraFlags, AlgebraMap, IdealInAlgebra, PresentedAlgebra};
use crate::certify::{AffinenessCertificate, HeightWitness, SectionChart};
use crate::error::{Error, Result};
use crate::groebner::GbConfig;
use crate::monoid::{toric_ideal, AffineMonoid, IntersectionEmbedding, ToricPresentation};
use crate::polycore::{Field, MonomialOrder, PolyRing, Polynomial};
use crate::surface::{blowup_lattice, CurveConfig, DivClass, PicardLattice};

#[derive(Clone, Debug)]
pub enum Entity {
    Ring(Arc<PolyRing>),
    Algebra(Arc<PresentedAlgebra>),
    Ideal(IdealInAlgebra),
    Map(AlgebraMap),
    Witness(HeightWitness),
    Certificate {
        ideal: String,
        cert: AffinenessCertificate,
    },
    Monoid(ToricPresentation),
    Embedding {
        monoid: String,
        embedding: IntersectionEmbedding,
    },
    Lattice(Arc<PicardLattice>),
    Class(DivClass),
    Config(CurveConfig),
}

impl Entity {
    fn kind(&self) -> &'static str {
        match self {
            Entity::Ring(_) => "ring",
            Entity::Algebra(_) => "algebra",
            Entity::Ideal(_) => "ideal",
            Entity::Map(_) => "map",
            Entity::Witness(_) => "witness",
            Entity::Certificate { .. } => "certificate",
            Entity::Monoid(_) => "monoid",
            Entity::Embedding { .. } => "embedding",
            Entity::Lattice(_) => "lattice",
            Entity::Class(_) => "class",
            Entity::Config(_) => "config",
        }
    }
}

/// A session whose names all resolve, with tasks in file order.
#[derive(Clone, Debug)]
pub struct Resolved {
    entities: HashMap<String, Entity>,
    pub tasks: Vec<Located<TaskKind>>,
}

impl Resolved {
    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    pub fn ideal(&self, name: &str) -> &IdealInAlgebra {
        match self.entities.get(name) {
            Some(Entity::Ideal(i)) => i,
            _ => unreachable!("checked during resolution"),
        }
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }
}

fn at<T>(loc: &Located<T>, msg: impl Into<String>) -> Error {
    Error::Resolve {
        line: loc.line,
        col: loc.col,
        msg: msg.into(),
    }
}

/// Library errors raised while building an object are reported at the
/// declaration, except resource-cap failures which keep their own kind.
fn located<T, L>(loc: &Located<L>, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::ComputationTooLarge { .. } | Error::Resolve { .. } => e,
        other => at(loc, other.to_string()),
    })
}

struct Env<'a> {
    entities: HashMap<String, Entity>,
    cfg: &'a GbConfig,
}

impl Env<'_> {
    fn lookup(&self, n: &Name) -> Result<&Entity> {
        self.entities
            .get(&n.node)
            .ok_or_else(|| at(n, format!("unresolved reference `{}`", n.node)))
    }

    fn wrong_kind(n: &Name, want: &str, got: &Entity) -> Error {
        at(
            n,
            format!("`{}` is a {}, expected {want}", n.node, got.kind()),
        )
    }

    fn ring(&self, n: &Name) -> Result<Arc<PolyRing>> {
        match self.lookup(n)? {
            Entity::Ring(r) => Ok(r.clone()),
            e => Err(Self::wrong_kind(n, "a ring", e)),
        }
    }

    fn algebra(&self, n: &Name) -> Result<Arc<PresentedAlgebra>> {
        match self.lookup(n)? {
            Entity::Algebra(a) => Ok(a.clone()),
            Entity::Monoid(t) => Ok(t.algebra.clone()),
            e => Err(Self::wrong_kind(n, "an algebra", e)),
        }
    }

    fn ideal(&self, n: &Name) -> Result<&IdealInAlgebra> {
        match self.lookup(n)? {
            Entity::Ideal(i) => Ok(i),
            e => Err(Self::wrong_kind(n, "an ideal", e)),
        }
    }

    fn map(&self, n: &Name) -> Result<&AlgebraMap> {
        match self.lookup(n)? {
            Entity::Map(m) => Ok(m),
            e => Err(Self::wrong_kind(n, "a map", e)),
        }
    }

    fn monoid(&self, n: &Name) -> Result<&ToricPresentation> {
        match self.lookup(n)? {
            Entity::Monoid(t) => Ok(t),
            e => Err(Self::wrong_kind(n, "a monoid", e)),
        }
    }

    fn lattice(&self, n: &Name) -> Result<Arc<PicardLattice>> {
        match self.lookup(n)? {
            Entity::Lattice(l) => Ok(l.clone()),
            e => Err(Self::wrong_kind(n, "a lattice", e)),
        }
    }

    fn poly(&self, ring: &Arc<PolyRing>, e: &LExpr) -> Result<Polynomial> {
        eval_poly(ring, &e.node).map_err(|msg| at(e, msg))
    }

    fn curve(&self, lattice: &Arc<PicardLattice>, n: &Name) -> Result<DivClass> {
        if let Some(i) = lattice.label_index(&n.node) {
            return Ok(DivClass::basis(lattice, i));
        }
        match self.lookup(n)? {
            Entity::Class(c) if c.lattice() == lattice => Ok(c.clone()),
            Entity::Class(_) => Err(at(n, format!("class `{}` is on another lattice", n.node))),
            e => Err(Self::wrong_kind(n, "a class", e)),
        }
    }
}

/// Evaluates an expression as a polynomial in `ring`.
pub fn eval_poly(ring: &Arc<PolyRing>, e: &Expr) -> std::result::Result<Polynomial, String> {
    Ok(match e {
        Expr::Int(n) => Polynomial::constant(ring, ring.field().from_bigint(n)),
        Expr::Var(v) => match ring.var_index(v) {
            Some(i) => Polynomial::var(ring, i),
            None => return Err(format!("`{v}` is not a variable of {ring}")),
        },
        Expr::Neg(a) => -&eval_poly(ring, a)?,
        Expr::Add(a, b) => &eval_poly(ring, a)? + &eval_poly(ring, b)?,
        Expr::Sub(a, b) => &eval_poly(ring, a)? - &eval_poly(ring, b)?,
        Expr::Mul(a, b) => &eval_poly(ring, a)? * &eval_poly(ring, b)?,
        Expr::Div(a, n) => {
            if n.is_zero() {
                return Err("division by zero".into());
            }
            let inv = BigRational::new(BigInt::from(1), n.clone());
            let c = ring
                .field()
                .from_rational(&inv)
                .ok_or_else(|| format!("{n} is not invertible in {}", ring.field()))?;
            eval_poly(ring, a)?.scale(&c)
        }
        Expr::Pow(a, n) => eval_poly(ring, a)?.pow(*n),
    })
}

enum Lin {
    Const(i64),
    Class(Vec<i64>),
}

fn eval_class(
    env: &Env,
    lattice: &Arc<PicardLattice>,
    e: &Expr,
) -> std::result::Result<Lin, String> {
    let overflow = || "integer overflow in class expression".to_string();
    let combine = |a: Lin, b: Lin, sign: i64| -> std::result::Result<Lin, String> {
        match (a, b) {
            (Lin::Const(x), Lin::Const(y)) => Ok(Lin::Const(
                y.checked_mul(sign)
                    .and_then(|y| x.checked_add(y))
                    .ok_or_else(overflow)?,
            )),
            (Lin::Class(x), Lin::Class(y)) => Ok(Lin::Class(
                x.iter()
                    .zip(&y)
                    .map(|(a, b)| b.checked_mul(sign).and_then(|b| a.checked_add(b)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(overflow)?,
            )),
            _ => Err("cannot add an integer to a divisor class".into()),
        }
    };
    let scale = |k: i64, v: Vec<i64>| -> std::result::Result<Lin, String> {
        Ok(Lin::Class(
            v.iter()
                .map(|c| c.checked_mul(k))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(overflow)?,
        ))
    };
    Ok(match e {
        Expr::Int(n) => Lin::Const(n.to_i64().ok_or_else(overflow)?),
        Expr::Var(v) => {
            let n = Located::new(v.clone(), 0, 0);
            let c = env.curve(lattice, &n).map_err(|e| match e {
                Error::Resolve { msg, .. } => msg,
                other => other.to_string(),
            })?;
            Lin::Class(c.coeffs().to_vec())
        }
        Expr::Neg(a) => match eval_class(env, lattice, a)? {
            Lin::Const(x) => Lin::Const(x.checked_neg().ok_or_else(overflow)?),
            Lin::Class(v) => scale(-1, v)?,
        },
        Expr::Add(a, b) => combine(eval_class(env, lattice, a)?, eval_class(env, lattice, b)?, 1)?,
        Expr::Sub(a, b) => combine(eval_class(env, lattice, a)?, eval_class(env, lattice, b)?, -1)?,
        Expr::Mul(a, b) => match (eval_class(env, lattice, a)?, eval_class(env, lattice, b)?) {
            (Lin::Const(x), Lin::Const(y)) => Lin::Const(x.checked_mul(y).ok_or_else(overflow)?),
            (Lin::Const(k), Lin::Class(v)) | (Lin::Class(v), Lin::Const(k)) => scale(k, v)?,
            _ => return Err("product of two divisor classes is not a class".into()),
        },
        Expr::Div(..) => return Err("division is not allowed in class expressions".into()),
        Expr::Pow(a, n) => match eval_class(env, lattice, a)? {
            Lin::Const(x) => Lin::Const(x.checked_pow(*n).ok_or_else(overflow)?),
            Lin::Class(_) => return Err("powers of divisor classes are not classes".into()),
        },
    })
}

/// Resolves every declaration in order. Names share one namespace and must
/// be declared before use.
pub fn resolve(s: &Session, cfg: &GbConfig) -> Result<Resolved> {
    let mut env = Env {
        entities: HashMap::new(),
        cfg,
    };
    let mut tasks = Vec::new();
    for item in &s.items {
        if let Some(name) = item.node.name() {
            if env.entities.contains_key(&name.node) {
                return Err(at(name, format!("duplicate name `{}`", name.node)));
            }
        }
        let entity = match &item.node {
            Item::Ring { name, field, vars } => {
                let field = match field {
                    FieldSpec::Rational => Field::Rational,
                    FieldSpec::Prime(p) => {
                        let p = p
                            .to_u32()
                            .ok_or_else(|| at(item, format!("{p} is not below 2^31")))?;
                        located(item, Field::prime(p))?
                    }
                };
                let ring = located(
                    name,
                    PolyRing::new(
                        vars.iter().map(|v| v.node.clone()),
                        field,
                        MonomialOrder::GrevLex,
                    ),
                )?;
                Entity::Ring(ring)
            }
            Item::Algebra {
                name,
                ring,
                relations,
                domain,
                factorial,
            } => {
                let r = env.ring(ring)?;
                let rels = relations
                    .iter()
                    .map(|e| env.poly(&r, e))
                    .collect::<Result<Vec<_>>>()?;
                let flags = AlgebraFlags {
                    domain: *domain,
                    factorial: *factorial,
                };
                Entity::Algebra(located(
                    name,
                    PresentedAlgebra::new(name.node.clone(), &r, rels, flags),
                )?)
            }
            Item::Ideal {
                name,
                algebra,
                gens,
            } => {
                let a = env.algebra(algebra)?;
                let gens = gens
                    .iter()
                    .map(|e| env.poly(a.ring(), e))
                    .collect::<Result<Vec<_>>>()?;
                Entity::Ideal(located(name, IdealInAlgebra::new(&a, gens, env.cfg))?)
            }
            Item::Map {
                name,
                source,
                target,
                images,
            } => {
                let src = env.algebra(source)?;
                let tgt = env.algebra(target)?;
                let mut slots: Vec<Option<Polynomial>> = vec![None; src.ring().arity()];
                for (v, e) in images {
                    let Some(i) = src.ring().var_index(&v.node) else {
                        return Err(at(
                            v,
                            format!("`{}` is not a variable of `{}`", v.node, source.node),
                        ));
                    };
                    if slots[i].is_some() {
                        return Err(at(v, format!("`{}` is assigned twice", v.node)));
                    }
                    slots[i] = Some(env.poly(tgt.ring(), e)?);
                }
                let images = slots
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| {
                        p.ok_or_else(|| {
                            at(
                                name,
                                format!("no image given for `{}`", src.ring().vars()[i]),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Entity::Map(located(
                    name,
                    AlgebraMap::new(name.node.clone(), &src, &tgt, images),
                )?)
            }
            Item::Witness { name, map, height } => Entity::Witness(HeightWitness {
                name: name.node.clone(),
                map: env.map(map)?.clone(),
                claimed: *height,
            }),
            Item::Certificate {
                name,
                ideal,
                sections,
            } => {
                let a = env.ideal(ideal)?.algebra().clone();
                let sections = sections
                    .iter()
                    .map(|charts| {
                        Ok(SectionChart {
                            charts: charts
                                .iter()
                                .map(|(n, d)| Ok((env.poly(a.ring(), n)?, env.poly(a.ring(), d)?)))
                                .collect::<Result<Vec<_>>>()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Entity::Certificate {
                    ideal: ideal.node.clone(),
                    cert: AffinenessCertificate {
                        name: name.node.clone(),
                        sections,
                    },
                }
            }
            Item::Monoid {
                name,
                rank,
                generators,
                vars,
                normal,
                positive,
            } => {
                let m = located(
                    name,
                    AffineMonoid::new(
                        name.node.clone(),
                        *rank,
                        generators.clone(),
                        vars.iter().map(|v| v.node.clone()).collect(),
                        *positive,
                        *normal,
                    ),
                )?;
                Entity::Monoid(located(name, toric_ideal(&m, env.cfg))?)
            }
            Item::Embedding {
                name,
                monoid,
                s,
                k,
                images,
                intersection_property,
            } => {
                env.monoid(monoid)?;
                Entity::Embedding {
                    monoid: monoid.node.clone(),
                    embedding: IntersectionEmbedding {
                        name: name.node.clone(),
                        s: *s,
                        k: *k,
                        images: images.clone(),
                        intersection_property: *intersection_property,
                    },
                }
            }
            Item::Lattice { name, spec } => Entity::Lattice(match spec {
                LatticeSpec::Blowup(n) => blowup_lattice(name.node.clone(), *n),
                LatticeSpec::Matrix { labels, rows } => located(
                    name,
                    PicardLattice::new(name.node.clone(), labels.clone(), rows.clone()),
                )?,
            }),
            Item::Class {
                name,
                lattice,
                expr,
            } => {
                let l = env.lattice(lattice)?;
                match eval_class(&env, &l, &expr.node).map_err(|m| at(expr, m))? {
                    Lin::Class(v) => Entity::Class(located(name, DivClass::new(&l, v))?),
                    Lin::Const(_) => {
                        return Err(at(expr, "expected a divisor class, found an integer"))
                    }
                }
            }
            Item::Config {
                name,
                lattice,
                components,
                effective,
                irreducible,
                support,
                tests,
                tests_effective,
                assumptions,
            } => {
                let l = env.lattice(lattice)?;
                let curves = |names: &[Name]| {
                    names
                        .iter()
                        .map(|n| Ok((n.node.clone(), env.curve(&l, n)?)))
                        .collect::<Result<Vec<_>>>()
                };
                Entity::Config(CurveConfig {
                    name: name.node.clone(),
                    lattice: l.clone(),
                    components: curves(components)?,
                    support: support.clone(),
                    tests: curves(tests)?,
                    components_effective: *effective,
                    components_irreducible: *irreducible,
                    tests_effective: *tests_effective,
                    assumptions: assumptions.clone(),
                })
            }
            Item::Task(t) => {
                check_task(&env, t)?;
                tasks.push(Located::new(t.clone(), item.line, item.col));
                continue;
            }
        };
        let name = item.node.name().expect("declarations are named");
        env.entities.insert(name.node.clone(), entity);
    }
    Ok(Resolved {
        entities: env.entities,
        tasks,
    })
}

fn check_task(env: &Env, t: &TaskKind) -> Result<()> {
    match t {
        TaskKind::Ledger {
            ideal, evidence, ..
        } => {
            env.ideal(ideal)?;
            for e in evidence {
                match env.lookup(e)? {
                    Entity::Witness(_) | Entity::Map(_) | Entity::Embedding { .. } => {}
                    Entity::Certificate { ideal: target, .. } => {
                        if *target != ideal.node {
                            return Err(at(
                                e,
                                format!(
                                    "certificate `{}` is for `{target}`, not `{}`",
                                    e.node, ideal.node
                                ),
                            ));
                        }
                    }
                    other => {
                        return Err(Env::wrong_kind(
                            e,
                            "a witness, certificate, embedding or map",
                            other,
                        ))
                    }
                }
            }
        }
        TaskKind::MonoidAffine { ideal, embedding } => {
            env.ideal(ideal)?;
            match env.lookup(embedding)? {
                Entity::Embedding { .. } => {}
                other => return Err(Env::wrong_kind(embedding, "an embedding", other)),
            }
        }
        TaskKind::Purity {
            ideal,
            normalization,
        } => {
            env.ideal(ideal)?;
            env.map(normalization)?;
        }
        TaskKind::Surface { config } => match env.lookup(config)? {
            Entity::Config(_) => {}
            other => return Err(Env::wrong_kind(config, "a config", other)),
        },
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::parse_session;

    fn run(src: &str) -> Result<Resolved> {
        resolve(&parse_session(src).unwrap(), &GbConfig::default())
    }

    #[test]
    fn unresolved_and_duplicate() {
        let err = run("ideal a in A = (x)").unwrap_err();
        assert!(matches!(err, Error::Resolve { line: 1, col: 12, .. }), "{err:?}");
        let err = run("ring R = QQ[x]\nring R = QQ[y]").unwrap_err();
        assert!(matches!(err, Error::Resolve { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn unknown_variable_is_located() {
        let err = run("ring R = QQ[x]\nalgebra A = R / (x*y) domain").unwrap_err();
        let Error::Resolve { line, col, msg } = err else {
            panic!()
        };
        assert_eq!((line, col), (2, 18));
        assert!(msg.contains("`y`"), "{msg}");
    }

    #[test]
    fn classes_are_linear() {
        let r = run("lattice S = blowup 2\nclass Y in S = 3*H - E1 - 2*E2\nclass Z in S = Y + E1").unwrap();
        let Some(Entity::Class(c)) = r.get("Z") else {
            panic!()
        };
        assert_eq!(c.coeffs(), &[3, 0, -2]);
        assert!(run("lattice S = blowup 1\nclass Y in S = H*E1").is_err());
    }

    #[test]
    fn map_must_assign_every_variable() {
        let err = run("ring R = QQ[x, y]\nalgebra A = R / () domain\nmap f : A -> A { x -> y }")
            .unwrap_err();
        assert!(err.to_string().contains("no image given for `y`"), "{err}");
    }

    #[test]
    fn prime_field_ring() {
        assert!(run("ring R = GF(7)[x]").is_ok());
        assert!(run("ring R = GF(8)[x]").is_err());
        assert!(run("ring R = GF(7)[x]\nalgebra A = R / (x/7)").is_err());
    }
}
