use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector over the variables of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }
}

/// A monomial order. `Block(k)` is an elimination order: the first `k`
/// variables are compared by graded reverse lex and dominate; ties are broken
/// by graded reverse lex on the remaining variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // smaller exponent in the last differing variable wins
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Unchecked comparison; callers guarantee equal arity.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::Block(k) => {
                let k = (*k).min(a.0.len());
                grevlex(&a.0[..k], &b.0[..k]).then_with(|| grevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }
}

/// Compare two monomials, checking that their arities agree.
pub fn order_compare(order: MonomialOrder, m1: &Monomial, m2: &Monomial) -> Result<Ordering> {
    if m1.arity() != m2.arity() {
        return Err(Error::ArityMismatch {
            expected: m1.arity(),
            found: m2.arity(),
        });
    }
    Ok(order.cmp(m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn lex_first_variable_dominates() {
        assert_eq!(
            order_compare(MonomialOrder::Lex, &m(&[1, 0]), &m(&[0, 5])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn grevlex_degree_dominates() {
        assert_eq!(
            order_compare(MonomialOrder::GrevLex, &m(&[1, 0]), &m(&[0, 5])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn reflexive_in_every_order() {
        for o in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Block(1)] {
            assert_eq!(
                order_compare(o, &m(&[2, 3, 1]), &m(&[2, 3, 1])).unwrap(),
                Ordering::Equal
            );
        }
    }

    #[test]
    fn grevlex_tie_break_on_last_variable() {
        // x*z vs y^2 in K[x,y,z]: y^2 is larger
        assert_eq!(
            MonomialOrder::GrevLex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn block_order_eliminates_first_block() {
        // t > anything free of t, regardless of degree
        let o = MonomialOrder::Block(1);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 7, 7])), Ordering::Greater);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        assert_eq!(
            order_compare(MonomialOrder::Lex, &m(&[1]), &m(&[1, 2])),
            Err(Error::ArityMismatch {
                expected: 1,
                found: 2
            })
        );
    }
}
