//! Sparse multivariate polynomials and rational functions over a number field.

mod gcd;
mod poly;
mod ratfunc;

pub use gcd::{content_in, poly_gcd, poly_lcm, primitive_part_in, pseudo_remainder};
pub use poly::{poly_arith, Monomial, Poly, PolyOp};
pub use ratfunc::{substitute, RatFunc};
