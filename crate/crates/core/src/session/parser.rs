//! Recursive-descent parser for session files.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 10_000;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

/// Parses a whole session file.
pub fn parse_session(text: &str) -> Result<Session> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        depth: 0,
    };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(Session { items })
}

/// Parses a single polynomial expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(e.node)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn error(&self, msg: String) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    /// `a-b` spelled as identifier, minus, identifier.
    fn is_compound(&self, first: &str, second: &str) -> bool {
        self.is_word(first)
            && self.peek_at(1) == &Tok::Sym('-')
            && matches!(self.peek_at(2), Tok::Ident(s) if s == second)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.peek().describe())))
        }
    }

    fn expect_arrow(&mut self) -> Result<()> {
        if self.peek() == &Tok::Arrow {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `->`, found {}", self.peek().describe())))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {}", self.peek().describe())))
        }
    }

    fn expect_compound(&mut self, first: &str, second: &str) -> Result<()> {
        if self.is_compound(first, second) {
            self.pos += 3;
            Ok(())
        } else {
            Err(self.error(format!(
                "expected `{first}-{second}`, found {}",
                self.peek().describe()
            )))
        }
    }

    fn name(&mut self) -> Result<Name> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Located::new(s, line, col))
            }
            t => Err(self.error(format!("expected a name, found {}", t.describe()))),
        }
    }

    fn names(&mut self) -> Result<Vec<Name>> {
        let mut v = vec![self.name()?];
        while self.eat_sym(',') {
            v.push(self.name()?);
        }
        Ok(v)
    }

    fn big_int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            t => Err(self.error(format!("expected an integer, found {}", t.describe()))),
        }
    }

    fn signed_i64(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        let at = self.here();
        let n = self.big_int()?;
        let n = if neg { -n } else { n };
        n.to_i64().ok_or(Error::Parse {
            line: at.0,
            col: at.1,
            msg: "integer out of range".into(),
        })
    }

    fn usize(&mut self) -> Result<usize> {
        let at = self.here();
        let n = self.big_int()?;
        n.to_usize()
            .filter(|&n| n <= 1_000_000)
            .ok_or(Error::Parse {
                line: at.0,
                col: at.1,
                msg: "integer out of range".into(),
            })
    }

    fn int_tuple(&mut self) -> Result<Vec<i64>> {
        self.expect_sym('(')?;
        let mut v = Vec::new();
        if !self.is_sym(')') {
            v.push(self.signed_i64()?);
            while self.eat_sym(',') {
                v.push(self.signed_i64()?);
            }
        }
        self.expect_sym(')')?;
        Ok(v)
    }

    fn tuple_set(&mut self) -> Result<Vec<Vec<i64>>> {
        self.expect_sym('{')?;
        let mut v = Vec::new();
        if !self.is_sym('}') {
            v.push(self.int_tuple()?);
            while self.eat_sym(',') {
                v.push(self.int_tuple()?);
            }
        }
        self.expect_sym('}')?;
        Ok(v)
    }

    /// `( e1, ..., ek )`, possibly empty.
    fn expr_list(&mut self) -> Result<Vec<LExpr>> {
        self.expect_sym('(')?;
        let mut v = Vec::new();
        if !self.is_sym(')') {
            v.push(self.expr()?);
            while self.eat_sym(',') {
                v.push(self.expr()?);
            }
        }
        self.expect_sym(')')?;
        Ok(v)
    }

    fn expr(&mut self) -> Result<LExpr> {
        let (line, col) = self.here();
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply".into()));
        }
        let e = self.sum();
        self.depth -= 1;
        Ok(Located::new(e?, line, col))
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            if self.eat_sym('+') {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.eat_sym('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat_sym('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat_sym('/') {
                e = Expr::Div(Box::new(e), self.big_int()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(self.error("expression nested too deeply".into()));
            }
            let e = self.unary();
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(e?)));
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let at = self.here();
            let n = self.big_int()?;
            let n = n.to_u32().filter(|&n| n <= MAX_EXPONENT).ok_or(Error::Parse {
                line: at.0,
                col: at.1,
                msg: format!("exponent exceeds {MAX_EXPONENT}"),
            })?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Var(s))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e.node)
            }
            t => Err(self.error(format!("expected a term, found {}", t.describe()))),
        }
    }

    fn item(&mut self) -> Result<Located<Item>> {
        let (line, col) = self.here();
        let kw = match self.peek().clone() {
            Tok::Ident(s) => s,
            t => return Err(self.error(format!("expected a declaration, found {}", t.describe()))),
        };
        self.bump();
        let item = match kw.as_str() {
            "ring" => self.ring()?,
            "algebra" => self.algebra()?,
            "ideal" => {
                let name = self.name()?;
                self.expect_word("in")?;
                let algebra = self.name()?;
                self.expect_sym('=')?;
                Item::Ideal {
                    name,
                    algebra,
                    gens: self.expr_list()?,
                }
            }
            "map" => self.map()?,
            "witness" => {
                let name = self.name()?;
                self.expect_sym('=')?;
                self.expect_word("map")?;
                let map = self.name()?;
                self.expect_word("height")?;
                Item::Witness {
                    name,
                    map,
                    height: self.signed_i64()?,
                }
            }
            "certificate" => self.certificate()?,
            "monoid" => self.monoid()?,
            "embedding" => self.embedding()?,
            "lattice" => self.lattice()?,
            "class" => {
                let name = self.name()?;
                self.expect_word("in")?;
                let lattice = self.name()?;
                self.expect_sym('=')?;
                Item::Class {
                    name,
                    lattice,
                    expr: self.expr()?,
                }
            }
            "config" => self.config()?,
            "task" => Item::Task(self.task()?),
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unknown declaration `{other}`"),
                })
            }
        };
        Ok(Located::new(item, line, col))
    }

    fn ring(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_sym('=')?;
        let field = if self.eat_word("QQ") {
            FieldSpec::Rational
        } else if self.eat_word("GF") {
            self.expect_sym('(')?;
            let p = self.big_int()?;
            self.expect_sym(')')?;
            FieldSpec::Prime(p)
        } else {
            return Err(self.error(format!(
                "expected `QQ` or `GF(p)`, found {}",
                self.peek().describe()
            )));
        };
        self.expect_sym('[')?;
        let vars = self.names()?;
        self.expect_sym(']')?;
        Ok(Item::Ring { name, field, vars })
    }

    fn algebra(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_sym('=')?;
        let ring = self.name()?;
        let relations = if self.eat_sym('/') {
            self.expr_list()?
        } else {
            Vec::new()
        };
        let mut domain = false;
        let mut factorial = false;
        loop {
            if self.eat_word("domain") {
                domain = true;
            } else if self.eat_word("factorial") {
                factorial = true;
            } else {
                break;
            }
        }
        Ok(Item::Algebra {
            name,
            ring,
            relations,
            domain,
            factorial,
        })
    }

    fn map(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_sym(':')?;
        let source = self.name()?;
        self.expect_arrow()?;
        let target = self.name()?;
        self.expect_sym('{')?;
        let mut images = Vec::new();
        if !self.is_sym('}') {
            loop {
                let v = self.name()?;
                self.expect_arrow()?;
                images.push((v, self.expr()?));
                if !self.eat_sym(',') {
                    break;
                }
            }
        }
        self.expect_sym('}')?;
        Ok(Item::Map {
            name,
            source,
            target,
            images,
        })
    }

    fn certificate(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_word("for")?;
        let ideal = self.name()?;
        self.expect_sym('{')?;
        let mut sections = Vec::new();
        while self.eat_word("section") {
            self.expect_sym('{')?;
            let mut charts = Vec::new();
            if !self.is_sym('}') {
                loop {
                    self.expect_sym('(')?;
                    let n = self.expr()?;
                    self.expect_sym(',')?;
                    let d = self.expr()?;
                    self.expect_sym(')')?;
                    charts.push((n, d));
                    if !self.eat_sym(',') {
                        break;
                    }
                }
            }
            self.expect_sym('}')?;
            sections.push(charts);
        }
        self.expect_sym('}')?;
        Ok(Item::Certificate {
            name,
            ideal,
            sections,
        })
    }

    fn monoid(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_word("rank")?;
        let rank = self.usize()?;
        self.expect_sym('=')?;
        let generators = self.tuple_set()?;
        self.expect_word("vars")?;
        let vars = self.names()?;
        let mut normal = false;
        let mut positive = false;
        loop {
            if self.eat_word("normal") {
                normal = true;
            } else if self.eat_word("positive") {
                positive = true;
            } else {
                break;
            }
        }
        Ok(Item::Monoid {
            name,
            rank,
            generators,
            vars,
            normal,
            positive,
        })
    }

    fn embedding(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_word("for")?;
        let monoid = self.name()?;
        self.expect_word("into")?;
        self.expect_word("Z")?;
        self.expect_sym('^')?;
        let s = self.usize()?;
        self.expect_word("x")?;
        self.expect_word("N")?;
        self.expect_sym('^')?;
        let k = self.usize()?;
        self.expect_sym('=')?;
        let images = self.tuple_set()?;
        let intersection_property = if self.is_compound("intersection", "property") {
            self.pos += 3;
            true
        } else {
            false
        };
        Ok(Item::Embedding {
            name,
            monoid,
            s,
            k,
            images,
            intersection_property,
        })
    }

    fn lattice(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_sym('=')?;
        let spec = if self.eat_word("blowup") {
            LatticeSpec::Blowup(self.usize()?)
        } else if self.eat_word("matrix") {
            self.expect_sym('(')?;
            let labels = self.names()?.into_iter().map(|n| n.node).collect();
            self.expect_sym(')')?;
            self.expect_sym('[')?;
            let mut rows = Vec::new();
            loop {
                self.expect_sym('[')?;
                let mut row = vec![self.signed_i64()?];
                while self.eat_sym(',') {
                    row.push(self.signed_i64()?);
                }
                self.expect_sym(']')?;
                rows.push(row);
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym(']')?;
            LatticeSpec::Matrix { labels, rows }
        } else {
            return Err(self.error(format!(
                "expected `blowup` or `matrix`, found {}",
                self.peek().describe()
            )));
        };
        Ok(Item::Lattice { name, spec })
    }

    fn config(&mut self) -> Result<Item> {
        let name = self.name()?;
        self.expect_word("on")?;
        let lattice = self.name()?;
        self.expect_sym('{')?;
        let mut components = Vec::new();
        let (mut effective, mut irreducible) = (false, false);
        let mut support = Vec::new();
        let mut tests = Vec::new();
        let mut tests_effective = false;
        let mut assumptions = Vec::new();
        loop {
            if self.eat_word("components") {
                components = self.names()?;
                loop {
                    if self.eat_word("effective") {
                        effective = true;
                    } else if self.eat_word("irreducible") {
                        irreducible = true;
                    } else {
                        break;
                    }
                }
            } else if self.eat_word("support") {
                support = vec![self.signed_i64()?];
                while self.eat_sym(',') {
                    support.push(self.signed_i64()?);
                }
            } else if self.eat_word("tests") {
                tests = self.names()?;
                tests_effective = self.eat_word("effective");
            } else if self.eat_word("assume") {
                match self.bump() {
                    Tok::Str(s) => assumptions.push(s),
                    t => {
                        self.pos -= 1;
                        return Err(self.error(format!("expected a string, found {}", t.describe())));
                    }
                }
            } else {
                break;
            }
        }
        self.expect_sym('}')?;
        Ok(Item::Config {
            name,
            lattice,
            components,
            effective,
            irreducible,
            support,
            tests,
            tests_effective,
            assumptions,
        })
    }

    fn task(&mut self) -> Result<TaskKind> {
        if self.eat_word("ledger") {
            let ideal = self.name()?;
            let evidence = if self.eat_word("using") {
                self.names()?
            } else {
                Vec::new()
            };
            let sections_finitely_generated = self.is_compound("sections", "finitely");
            if sections_finitely_generated {
                self.pos += 3;
                self.expect_sym('-')?;
                self.expect_word("generated")?;
            }
            Ok(TaskKind::Ledger {
                ideal,
                evidence,
                sections_finitely_generated,
            })
        } else if self.is_compound("monoid", "affine") {
            self.expect_compound("monoid", "affine")?;
            let ideal = self.name()?;
            self.expect_word("via")?;
            Ok(TaskKind::MonoidAffine {
                ideal,
                embedding: self.name()?,
            })
        } else if self.eat_word("purity") {
            let ideal = self.name()?;
            self.expect_word("via")?;
            Ok(TaskKind::Purity {
                ideal,
                normalization: self.name()?,
            })
        } else if self.eat_word("surface") {
            Ok(TaskKind::Surface {
                config: self.name()?,
            })
        } else {
            Err(self.error(format!(
                "expected `ledger`, `monoid-affine`, `purity` or `surface`, found {}",
                self.peek().describe()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: &str = "\
ring P = QQ[R, S, T, Z]
algebra A = P / (R*S - T*Z) domain
ring Q = QQ[R, T]
algebra B = Q / () domain factorial
ideal a in A = (R, T)
map phi : A -> B { R -> R, S -> 0, T -> T, Z -> 0 }
witness w = map phi height 2
task ledger a using w
";

    #[test]
    fn example_session_parses() {
        let s = parse_session(EX).unwrap();
        assert_eq!(s.items.len(), 8);
        assert_eq!(s.tasks().count(), 1);
        let Item::Algebra { relations, domain, factorial, .. } = &s.items[1].node else {
            panic!()
        };
        assert_eq!(relations[0].node.to_string(), "R*S - T*Z");
        assert!(*domain && !*factorial);
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_session("").unwrap(), Session::default());
        assert_eq!(parse_session("# only a comment\n").unwrap(), Session::default());
    }

    #[test]
    fn double_comma_is_located() {
        let err = parse_session("ideal a in A = (R,,T)").unwrap_err();
        let Error::Parse { line, col, .. } = err else {
            panic!("{err:?}")
        };
        assert_eq!((line, col), (1, 19));
    }

    #[test]
    fn round_trip() {
        let s = parse_session(EX).unwrap();
        let again = parse_session(&render_session(&s)).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn expression_shapes() {
        for (src, out) in [
            ("-x^2", "-x^2"),
            ("(-x)^2", "(-x)^2"),
            ("a - (b - c)", "a - (b - c)"),
            ("a - b - c", "a - b - c"),
            ("1/2*x", "1/2*x"),
            ("x*(y + 1)", "x*(y + 1)"),
            ("((x))", "x"),
        ] {
            let e = parse_expr(src).unwrap();
            assert_eq!(e.to_string(), out);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = "(".repeat(10_000);
        assert!(parse_expr(&deep).is_err());
        let negs = "-".repeat(10_000) + "x";
        assert!(parse_expr(&negs).is_err());
    }

    #[test]
    fn compound_keywords() {
        let s = parse_session(
            "embedding e for M into Z^0 x N^2 = { (2, 0), (1, 1) } intersection-property\n\
             task monoid-affine a via e\n\
             task ledger a using w, c sections-finitely-generated",
        )
        .unwrap();
        assert_eq!(s.items.len(), 3);
        let again = parse_session(&render_session(&s)).unwrap();
        assert_eq!(s, again);
    }
}
