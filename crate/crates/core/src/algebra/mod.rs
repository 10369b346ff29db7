//! Finite-field arithmetic, polynomials and dense linear algebra.

pub mod field;
pub mod matrix;
pub mod poly;
mod primepoly;

pub use field::{weight, Field, FieldSpec, Gf};
pub use matrix::{Echelon, EchelonBasis, Matrix};
pub use poly::{poly_ext_gcd, poly_gcd, poly_gcd_many, Poly, UniPoly};
