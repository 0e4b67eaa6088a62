//! Exact scalars, sparse multivariate polynomials and dense/sparse linear
//! algebra. Everything here is generic over [`Field`].

pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod serial;
pub mod sparse;

pub use matrix::{dot, Matrix};
pub use poly::{monomials_of_degree, poly_determinant, Monomial, Poly, Vars};
pub use scalar::{format_rational, int, parse_rational, primitive_integer_vector, rat, Field, Fp, Rational};
pub use sparse::SparseSystem;

/// All monomials of the given total degree in `x1..x{n_vars}`, as
/// polynomials, in canonical (descending graded-lex) order.
pub fn homogeneous_basis(n_vars: usize, degree: u32) -> Vec<Poly<Rational>> {
    let vars = Vars::indexed("x", 1, n_vars);
    monomials_of_degree(n_vars, degree).into_iter().map(|m| Poly::monomial(&vars, m, num_traits::One::one())).collect()
}
