//! Syntax tree of session files and its canonical rendering.

use std::fmt::{self, Write};

use num_bigint::BigInt;

/// A node with the position of its first token. Equality ignores position.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub node: T,
    pub line: usize,
    pub col: usize,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T> Located<T> {
    pub fn new(node: T, line: usize, col: usize) -> Self {
        Located { node, line, col }
    }
}

pub type Name = Located<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by a positive integer literal.
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, u32),
}

pub type LExpr = Located<Expr>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(BigInt),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeSpec {
    Blowup(usize),
    Matrix {
        labels: Vec<String>,
        rows: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum TaskKind {
    Ledger {
        ideal: Name,
        evidence: Vec<Name>,
        sections_finitely_generated: bool,
    },
    MonoidAffine {
        ideal: Name,
        embedding: Name,
    },
    Purity {
        ideal: Name,
        normalization: Name,
    },
    Surface {
        config: Name,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Ring {
        name: Name,
        field: FieldSpec,
        vars: Vec<Name>,
    },
    Algebra {
        name: Name,
        ring: Name,
        relations: Vec<LExpr>,
        domain: bool,
        factorial: bool,
    },
    Ideal {
        name: Name,
        algebra: Name,
        gens: Vec<LExpr>,
    },
    Map {
        name: Name,
        source: Name,
        target: Name,
        images: Vec<(Name, LExpr)>,
    },
    Witness {
        name: Name,
        map: Name,
        height: i64,
    },
    Certificate {
        name: Name,
        ideal: Name,
        sections: Vec<Vec<(LExpr, LExpr)>>,
    },
    Monoid {
        name: Name,
        rank: usize,
        generators: Vec<Vec<i64>>,
        vars: Vec<Name>,
        normal: bool,
        positive: bool,
    },
    Embedding {
        name: Name,
        monoid: Name,
        s: usize,
        k: usize,
        images: Vec<Vec<i64>>,
        intersection_property: bool,
    },
    Lattice {
        name: Name,
        spec: LatticeSpec,
    },
    Class {
        name: Name,
        lattice: Name,
        expr: LExpr,
    },
    Config {
        name: Name,
        lattice: Name,
        components: Vec<Name>,
        effective: bool,
        irreducible: bool,
        support: Vec<i64>,
        tests: Vec<Name>,
        tests_effective: bool,
        assumptions: Vec<String>,
    },
    Task(TaskKind),
}

impl Item {
    /// The declared name; tasks declare nothing.
    pub fn name(&self) -> Option<&Name> {
        match self {
            Item::Ring { name, .. }
            | Item::Algebra { name, .. }
            | Item::Ideal { name, .. }
            | Item::Map { name, .. }
            | Item::Witness { name, .. }
            | Item::Certificate { name, .. }
            | Item::Monoid { name, .. }
            | Item::Embedding { name, .. }
            | Item::Lattice { name, .. }
            | Item::Class { name, .. }
            | Item::Config { name, .. } => Some(name),
            Item::Task(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Session {
    pub items: Vec<Located<Item>>,
}

impl Session {
    pub fn tasks(&self) -> impl Iterator<Item = &Located<Item>> {
        self.items
            .iter()
            .filter(|i| matches!(i.node, Item::Task(_)))
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Var(_) => 5,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let wrap = level(e) < min;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Int(n) => write!(out, "{n}").unwrap(),
        Expr::Var(v) => out.push_str(v),
        Expr::Neg(a) => {
            out.push('-');
            write_expr(out, a, 3);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(out, a, 1);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(out, b, 2);
        }
        Expr::Mul(a, b) => {
            write_expr(out, a, 2);
            out.push('*');
            write_expr(out, b, 3);
        }
        Expr::Div(a, n) => {
            write_expr(out, a, 2);
            write!(out, "/{n}").unwrap();
        }
        Expr::Pow(a, n) => {
            write_expr(out, a, 5);
            write!(out, "^{n}").unwrap();
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn tuple(v: &[i64]) -> String {
    format!("({})", join(v, |c| c.to_string()))
}

fn flag(out: &mut String, on: bool, word: &str) {
    if on {
        out.push(' ');
        out.push_str(word);
    }
}

/// Canonical text of a session; parsing it gives back an equal session.
pub fn render_session(s: &Session) -> String {
    let mut out = String::new();
    for item in &s.items {
        render_item(&mut out, &item.node);
        out.push('\n');
    }
    out
}

fn render_item(out: &mut String, item: &Item) {
    match item {
        Item::Ring { name, field, vars } => {
            let field = match field {
                FieldSpec::Rational => "QQ".to_string(),
                FieldSpec::Prime(p) => format!("GF({p})"),
            };
            write!(out, "ring {} = {field}[{}]", name.node, join(vars, |v| v.node.clone())).unwrap();
        }
        Item::Algebra {
            name,
            ring,
            relations,
            domain,
            factorial,
        } => {
            write!(
                out,
                "algebra {} = {} / ({})",
                name.node,
                ring.node,
                join(relations, |r| r.node.to_string())
            )
            .unwrap();
            flag(out, *domain, "domain");
            flag(out, *factorial, "factorial");
        }
        Item::Ideal {
            name,
            algebra,
            gens,
        } => {
            write!(
                out,
                "ideal {} in {} = ({})",
                name.node,
                algebra.node,
                join(gens, |g| g.node.to_string())
            )
            .unwrap();
        }
        Item::Map {
            name,
            source,
            target,
            images,
        } => {
            write!(
                out,
                "map {} : {} -> {} {{ {} }}",
                name.node,
                source.node,
                target.node,
                join(images, |(v, e)| format!("{} -> {}", v.node, e.node))
            )
            .unwrap();
        }
        Item::Witness { name, map, height } => {
            write!(out, "witness {} = map {} height {height}", name.node, map.node).unwrap();
        }
        Item::Certificate {
            name,
            ideal,
            sections,
        } => {
            writeln!(out, "certificate {} for {} {{", name.node, ideal.node).unwrap();
            for s in sections {
                writeln!(
                    out,
                    "  section {{ {} }}",
                    join(s, |(n, d)| format!("({}, {})", n.node, d.node))
                )
                .unwrap();
            }
            out.push('}');
        }
        Item::Monoid {
            name,
            rank,
            generators,
            vars,
            normal,
            positive,
        } => {
            write!(
                out,
                "monoid {} rank {rank} = {{ {} }} vars {}",
                name.node,
                join(generators, |g| tuple(g)),
                join(vars, |v| v.node.clone())
            )
            .unwrap();
            flag(out, *normal, "normal");
            flag(out, *positive, "positive");
        }
        Item::Embedding {
            name,
            monoid,
            s,
            k,
            images,
            intersection_property,
        } => {
            write!(
                out,
                "embedding {} for {} into Z^{s} x N^{k} = {{ {} }}",
                name.node,
                monoid.node,
                join(images, |g| tuple(g))
            )
            .unwrap();
            flag(out, *intersection_property, "intersection-property");
        }
        Item::Lattice { name, spec } => match spec {
            LatticeSpec::Blowup(n) => write!(out, "lattice {} = blowup {n}", name.node).unwrap(),
            LatticeSpec::Matrix { labels, rows } => write!(
                out,
                "lattice {} = matrix ({}) [{}]",
                name.node,
                labels.join(", "),
                join(rows, |r| format!("[{}]", join(r, |c| c.to_string())))
            )
            .unwrap(),
        },
        Item::Class {
            name,
            lattice,
            expr,
        } => {
            write!(out, "class {} in {} = {}", name.node, lattice.node, expr.node).unwrap();
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
            writeln!(out, "config {} on {} {{", name.node, lattice.node).unwrap();
            write!(out, "  components {}", join(components, |c| c.node.clone())).unwrap();
            flag(out, *effective, "effective");
            flag(out, *irreducible, "irreducible");
            writeln!(out).unwrap();
            writeln!(out, "  support {}", join(support, |c| c.to_string())).unwrap();
            if !tests.is_empty() {
                write!(out, "  tests {}", join(tests, |c| c.node.clone())).unwrap();
                flag(out, *tests_effective, "effective");
                writeln!(out).unwrap();
            }
            for a in assumptions {
                writeln!(out, "  assume \"{a}\"").unwrap();
            }
            out.push('}');
        }
        Item::Task(t) => match t {
            TaskKind::Ledger {
                ideal,
                evidence,
                sections_finitely_generated,
            } => {
                write!(out, "task ledger {}", ideal.node).unwrap();
                if !evidence.is_empty() {
                    write!(out, " using {}", join(evidence, |e| e.node.clone())).unwrap();
                }
                flag(out, *sections_finitely_generated, "sections-finitely-generated");
            }
            TaskKind::MonoidAffine { ideal, embedding } => {
                write!(out, "task monoid-affine {} via {}", ideal.node, embedding.node).unwrap()
            }
            TaskKind::Purity {
                ideal,
                normalization,
            } => write!(out, "task purity {} via {}", ideal.node, normalization.node).unwrap(),
            TaskKind::Surface { config } => write!(out, "task surface {}", config.node).unwrap(),
        },
    }
}

impl TaskKind {
    /// Short description, e.g. `ledger a`.
    pub fn label(&self) -> String {
        match self {
            TaskKind::Ledger { ideal, .. } => format!("ledger {}", ideal.node),
            TaskKind::MonoidAffine { ideal, embedding } => {
                format!("monoid-affine {} via {}", ideal.node, embedding.node)
            }
            TaskKind::Purity {
                ideal,
                normalization,
            } => format!("purity {} via {}", ideal.node, normalization.node),
            TaskKind::Surface { config } => format!("surface {}", config.node),
        }
    }
}
