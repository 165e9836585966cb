use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::{Field, MonomialOrder};

/// `K[x_1, ..., x_n]` together with the monomial order its polynomials are
/// sorted by.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        field: Field,
        order: MonomialOrder,
    ) -> Result<Arc<PolyRing>> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vars {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("`{v}` is not an identifier")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(Error::InvalidRing(format!(
                    "block split {k} exceeds {} variables",
                    vars.len()
                )));
            }
        }
        Ok(Arc::new(PolyRing { vars, field, order }))
    }

    /// Rational coefficients, graded reverse lex.
    pub fn rational<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Arc<PolyRing>> {
        Self::new(vars, Field::Rational, MonomialOrder::GrevLex)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            vars: self.vars.clone(),
            field: self.field,
            order,
        })
    }

    /// A variable name not used by this ring, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.var_index(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|n| self.var_index(n).is_none())
            .expect("unbounded search")
    }

    pub fn same(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(", "))
    }
}
