//! Sparse multivariate polynomials and monomial orders.
//!
//! Variables are indexed `0..n`; a higher index takes precedence in the
//! orders. When a distinguished variable `y` is present it occupies the
//! last slot and the ring uses [`MonomialOrder::Elimination`].

mod monomial;
mod poly;

pub use monomial::{mono_cmp, presentation_cmp, BaseOrder, Monomial, MonomialOrder};
pub use poly::{default_names, MultiPoly};
pub(crate) use poly::write_terms;
