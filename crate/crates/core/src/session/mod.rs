//! The session language: parsing, name resolution, task execution and
//! report rendering.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::{PolyRing, Polynomial};

pub mod ast;
mod lexer;
pub mod paper;
mod parser;
pub mod report;
mod resolve;
mod run;

pub use ast::{render_session, Session};
pub use parser::{parse_expr, parse_session};
pub use report::{render_report, Format, Report, Status, TaskResult};
pub use resolve::{resolve, Entity, Resolved};
pub use run::{run_session, RunOptions};

/// Parses a polynomial written in session syntax over `ring`.
pub fn parse_poly(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
    let e = parse_expr(text)?;
    resolve::eval_poly(ring, &e).map_err(Error::InvalidInput)
}
