//! Exact duality analysis for difference-of-convex problems
//! `inf { f(x) − g(x) : h_t(x) ≤ 0 }` on the real line.
//!
//! All scalars are exact rationals extended with `±∞`. Functions are
//! piecewise affine with open or closed breakpoints, which is enough to
//! express boundary jumps that separate convexity from even convexity.

pub mod conjcalc;
pub mod duals;
pub mod extreal;
pub mod generate;
pub mod instances;
pub mod interval;
pub mod lpexact;
pub mod oracle;
mod param;
pub mod problem;
pub mod pwafun;
pub mod report;
pub mod value;
pub mod witness;

pub use extreal::{ExtReal, Rational};
pub use interval::{EndPoint, Interval};
pub use pwafun::{Multiplier, PwaFunction};
pub use value::{DualValue, Witness};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{name} is not convex: {violation}")]
    NotConvex { name: String, violation: Box<pwafun::ConvexityViolation> },
    #[error("{0}")]
    Improper(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
