//! Exact computations with ∨-systems: weighted covector configurations, the
//! flat polynomial sections of their connections, closed-form potentials, and
//! the combinatorics of the underlying hyperplane arrangements.
//!
//! All arithmetic is over the rationals. The linear-algebra layer in
//! [`algebra`] is generic over [`algebra::Field`]; everything above it works
//! with the aliases below.

pub mod algebra;
pub mod arrangements;
pub mod error;
pub mod families;
pub mod flatsections;
pub mod potentials;
pub mod veesys;

pub use error::{Error, Result};

pub type Rational = algebra::Rational;
pub type MultiPoly = algebra::Poly<Rational>;
pub type RatMatrix = algebra::Matrix<Rational>;
