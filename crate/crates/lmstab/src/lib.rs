//! Exact-arithmetic engine for kernel sheaves on projective space.
//!
//! The library models coherent sheaves on `P^N` as graded submodules of free
//! modules over `S = k[x_0..x_N]`, computes their invariants (Hilbert
//! polynomial, rank, first Chern class, twisted global sections) with Groebner
//! bases and exact linear algebra, and issues certificate-backed
//! slope-stability verdicts for Lazarsfeld-Mukai kernel sheaves and kernel
//! bundles.
//!
//! Everything is computed over an exact coefficient field: `GF(p)` (default
//! `p = 32003`) or the rationals. All operations are deterministic; random
//! choices are drawn from seeded streams.

pub mod certify;
pub mod cli;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod lm;
pub mod module;
pub mod monomial;
pub mod par;
pub mod poly;
pub mod report;
pub mod sheaf;

pub use error::Error;
pub use field::{FieldSpec, Scalar};
pub use monomial::Monomial;
pub use poly::HPoly;

pub type Result<T> = std::result::Result<T, Error>;
