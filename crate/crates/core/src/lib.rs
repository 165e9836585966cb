//! Exact toolkit for bounding the superheight of an ideal `a` in a finitely
//! presented algebra and certifying whether the open set `D(a)` is affine.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod groebner;
pub mod monoid;
pub mod polycore;
pub mod session;
pub mod surface;

pub use error::{Error, Result};
