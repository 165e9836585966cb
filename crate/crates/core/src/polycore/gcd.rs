//! Multivariate gcd over the rationals: recursive content/primitive-part
//! decomposition with a subresultant remainder sequence in the main variable.

use crate::error::{Error, Result};
use crate::polycore::{Monomial, PolyRing, Polynomial};

/// A gcd of `f` and `g`, normalized to coprime integer coefficients with a
/// positive leading coefficient. `gcd(f, 0)` is the normalized `f`.
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    if !PolyRing::same(f.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    if !f.ring().field().is_rational() {
        return Err(Error::UnsupportedField(
            "polynomial gcd is only available over the rationals".into(),
        ));
    }
    Ok(gcd_rec(&f.primitive(), &g.primitive()).primitive())
}

/// gcd of a list; `0` for the empty list.
pub fn poly_gcd_all<'a>(
    ring: &std::sync::Arc<PolyRing>,
    polys: impl IntoIterator<Item = &'a Polynomial>,
) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(ring);
    for p in polys {
        acc = poly_gcd(&acc, p)?;
        if acc.is_one() {
            break;
        }
    }
    Ok(acc)
}

fn gcd_rec(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.primitive();
    }
    if g.is_zero() {
        return f.primitive();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.ring());
    }
    // pull out the common monomial factor first; it keeps the recursion shallow
    let mf = f.monomial_content();
    let mg = g.monomial_content();
    let mono = mf.gcd(&mg);
    if !mf.is_one() || !mg.is_one() {
        let f1 = f.div_monomial(&mf).expect("monomial content divides");
        let g1 = g.div_monomial(&mg).expect("monomial content divides");
        let rest = gcd_rec(&f1, &g1);
        return rest.mul_term(&mono, &f.ring().field().one());
    }

    let sf = f.support();
    let sg = g.support();
    let v = (0..sf.len())
        .rev()
        .find(|&i| sf[i] || sg[i])
        .expect("non-constant polynomials use some variable");
    if !sf[v] {
        return gcd_rec(f, &content_in(g, v));
    }
    if !sg[v] {
        return gcd_rec(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd_rec(&cf, &cg);
    let pf = exact(f, &cf);
    let pg = exact(g, &cg);
    let last = subresultant_last(pf, pg, v);
    let pp = exact(&last, &content_in(&last, v));
    (&c * &pp).primitive()
}

fn exact(f: &Polynomial, d: &Polynomial) -> Polynomial {
    f.div_exact(d)
        .expect("same ring")
        .expect("exact division in gcd")
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
fn content_in(f: &Polynomial, v: usize) -> Polynomial {
    let mut acc = Polynomial::zero(f.ring());
    for c in f.coeffs_in(v).iter().rev().filter(|c| !c.is_zero()) {
        acc = gcd_rec(&acc, c);
        if acc.is_constant() {
            return Polynomial::one(f.ring());
        }
    }
    acc
}

fn lead_coeff_in(f: &Polynomial, v: usize) -> Polynomial {
    f.coeffs_in(v).pop().expect("nonzero polynomial")
}

fn var_power(f: &Polynomial, v: usize, e: u32) -> Monomial {
    let mut exps = vec![0; f.ring().arity()];
    exps[v] = e;
    Monomial::new(exps)
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` in the variable `v`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    let lcb = lead_coeff_in(b, v);
    let one = a.ring().field().one();
    let mut r = a.clone();
    let mut remaining = a.degree_in(v) + 1 - db;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = lead_coeff_in(&r, v);
        let shifted = (&lcr * b).mul_term(&var_power(b, v, dr - db), &one);
        r = &(&lcb * &r) - &shifted;
        remaining -= 1;
    }
    &r * &lcb.pow(remaining)
}

/// Last nonzero element of the subresultant remainder sequence of `a` and
/// `b` in `v`, or `1` when the sequence reaches a `v`-free remainder.
fn subresultant_last(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    let ring = a.ring().clone();
    let mut g = Polynomial::one(&ring);
    let mut h = Polynomial::one(&ring);
    loop {
        let d = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Polynomial::one(&ring);
        }
        let divisor = &g * &h.pow(d);
        a = b;
        b = exact(&r, &divisor);
        g = lead_coeff_in(&a, v);
        if d > 0 {
            h = exact(&g.pow(d), &h.pow(d - 1));
        }
    }
}
