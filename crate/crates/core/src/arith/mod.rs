//! Exact ground-field arithmetic and dense univariate polynomials.

mod field;
pub(crate) mod fpoly;
pub(crate) mod intpoly;
pub(crate) mod modular;
mod unipoly;

pub use field::{is_prime_u64, Field, FieldElement};
pub(crate) use field::inv_mod;
pub use unipoly::UniPoly;
