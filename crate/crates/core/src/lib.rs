//! Exact computations with finite Verma modules over the Lie superalgebra E(5,10).

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod linalg;
pub mod omega;
pub mod parse;
pub mod rational;
pub mod s5;
pub mod search;
pub mod selftest;
pub mod sl5;
pub mod uminus;
pub mod verma;
pub mod weight;

pub use error::{Error, Result};
pub use rational::Rational;
pub use weight::Weight;
