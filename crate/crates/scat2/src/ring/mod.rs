//! Exact arithmetic: rationals, sparse polynomials, linear solving.
//!
//! Everything downstream of this module works with [`Scalar`] (arbitrary
//! precision rationals) and the two polynomial types: [`Poly3`] over the
//! symbols `g`, `b`, `c`, and the dense univariate [`UniPoly`].

mod gcd;
mod linalg;
mod poly3;
mod scalar;
mod unipoly;

pub use gcd::{poly_div_exact, poly_gcd, primitive_part};
pub use linalg::solve_exact;
pub use poly3::{binomial_poly, Poly3, Var};
pub use scalar::{binom_int, factorial, int, ratio, Scalar};
pub use unipoly::{binom_basis_expand, newton_interpolate, UniPoly};
