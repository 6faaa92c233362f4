//! An explicit Artin-Schreier tower of curves over F_8.
//!
//! The tower is `x_i^2 + x_i = x_{i-1} + 1 + 1/x_{i-1}` over the projective
//! line. This crate implements the pieces needed to check its invariants
//! from several independent directions:
//!
//! * [`gf2m`]: arithmetic in GF(2^m), traces and Artin-Schreier roots.
//! * [`laurent`]: truncated Laurent series at the boundary chains, exact
//!   principal parts, the `℘`-reduction of linear combinations and a
//!   symbolic ramification classifier built on it.
//! * [`rami`]: index sequences, the closed-form ramification ledger,
//!   counts of ramified points and the genus.
//! * [`points`]: rational chain enumeration and the asymptotic table.
//! * [`zeta`]: L-polynomials recovered from point counts.

pub mod exec;
pub mod gf2m;
pub mod laurent;
pub mod points;
pub mod rami;
pub mod zeta;

pub use exec::Execution;
pub use gf2m::{FieldDescriptor, FieldElement, FieldError};
