//! Exact scalars, monomials and orders, sparse multivariate polynomials,
//! and polynomial gcd.

mod gcd;
mod monomial;
mod poly;
mod ring;
mod scalar;

pub use gcd::{poly_gcd, poly_gcd_all};
pub use monomial::{order_compare, Monomial, MonomialOrder};
pub use poly::{poly_mul, Polynomial, Term};
pub use ring::PolyRing;
pub use scalar::{Field, Scalar};
