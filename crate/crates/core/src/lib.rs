//! Exact and certified-numeric building blocks for height computations on
//! algebraic numbers and elliptic curves.
//!
//! The crate is organized around a small exact core (big rationals, integer
//! polynomials, factorization, certified complex roots, number fields) with
//! domain layers on top: Weil heights, elliptic curves and their torsion
//! fields, supersingular prime selection, brute-force GL2 subgroup checks,
//! truncated unramified p-adic arithmetic with formal groups, Neron-Tate
//! heights by two independent methods, and equidistribution diagnostics.

pub mod arith;
pub mod dd;
pub mod poly;
pub mod roots;
pub mod nf;
pub mod field;
pub mod heights;
pub mod fq;
pub mod elliptic;
pub mod torsion;
pub mod primes;
pub mod gl2;
pub mod padic;
pub mod neron;
pub mod equidist;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
