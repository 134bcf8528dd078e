//! Exact-arithmetic engine for rank-2 scattering diagrams.
//!
//! Given a skew-symmetrizable 2x2 exchange matrix encoded by a pair of
//! positive integers `(b, c)`, the consistent scattering diagram is built
//! degree by degree: transporting monomials around a loop through all walls
//! exposes, at each total degree, the unique coefficient corrections that
//! restore path-order independence.  Every coefficient is an exact rational;
//! there is no floating point anywhere in this crate.
//!
//! The crate is organized in layers:
//!
//! - [`ring`]: rationals of arbitrary size, sparse polynomials in the three
//!   symbols `b`, `c`, `g`, exact linear solving, polynomial gcd.
//! - [`series`]: truncated two-variable power series and the substitution
//!   ops used by the slow reference transport.
//! - [`engine`]: walls, the loop transport, and the degree-by-degree solver
//!   producing numeric tables of wall coefficients `tau(i, j)`.
//! - [`fit`]: exact interpolation of `tau(i, j)` across many `(b, c)` inputs,
//!   reconstructing each entry as a polynomial in `b`, `c`, `g` where
//!   `g = gcd(i*b, j*c) / gcd(i, j)`.
//! - [`conjectures`]: closed-form families and eighteen automated checks
//!   against fitted polynomials and numeric tables.
//! - [`shell`]: plain-text cache files and the command-line front end.

pub mod conjectures;
pub mod engine;
pub mod fit;
pub mod ring;
pub mod series;
pub mod shell;

mod error;

pub use error::{Error, Result};
