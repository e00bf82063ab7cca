//! Kashaev invariants of hyperbolic knots at roots of unity, the exact
//! q-Pochhammer reciprocity formulas behind their quantum modularity, and
//! the numerical experiments built on top of them.
//!
//! Every complex quantity is carried by [`special::PComplex`], a pair of MPFR
//! floats; the working precision is always passed explicitly.

pub mod abelplana;
pub mod arith;
pub mod cli;
mod error;
pub mod knots;
pub mod modularity;
pub mod quad;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
