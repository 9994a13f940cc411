//! Exact computation in stated skein algebras of punctured surfaces.
//!
//! The library builds the finitely presented algebra attached to a groupoid
//! presentation of a punctured surface (or to a ciliated ribbon graph),
//! normalizes its elements against a terminating quadratic rewriting system,
//! certifies confluence of that system by exhausting critical monomials,
//! implements the quantum gauge group coaction with coinvariant extraction,
//! and specializes everything to classical SL(2) character varieties.
//!
//! All arithmetic is exact: coefficients live in the Laurent ring Z[w^(+/-1)]
//! or, after evaluation, in Q.

pub mod classical;
pub mod expr;
pub mod hopf;
pub mod linalg;
pub mod mat;
pub mod presentation;
pub mod relator;
pub mod rewrite;
pub mod ring;
pub mod surface;

pub use presentation::{ArcType, Presentation};
pub use rewrite::{NcPoly, NcWord, RewriteSystem};
pub use ring::Laurent;
