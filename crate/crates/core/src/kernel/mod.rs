//! Exact scalars: rationals and parameter polynomials.

mod parse;
mod poly;
mod rational;

pub use parse::{parse_linear, parse_poly, Linear};
pub use poly::{Exponents, Param, ParamPoly, NUM_PARAMS};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(Param),
    #[error("parse error: {0}")]
    Parse(String),
}
