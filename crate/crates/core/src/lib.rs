//! Factorization of univariate polynomials over an algebraic extension
//! field `K = k[x1..xn]/I`, where `I` is a maximal ideal given by a
//! Groebner basis and `k` is the rationals or a prime field.
//!
//! The extension factorization is reduced to linear algebra over `k`: the
//! characteristic polynomial of a multiplication map on `k[x, y]/<I, h>`
//! is factored over `k`, and each ground factor yields a factor of the
//! input through a gcd in `K[y]`.

pub mod arith;
pub mod cli;
pub mod driver;
pub mod error;
pub mod extfield;
pub mod multipoly;
pub mod linalg;
pub mod reduction;
pub mod unifactor;

pub use error::{Error, Result};
