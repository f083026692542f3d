//! Exact arithmetic for the algebra of anticyclotomic towers at a
//! non-ordinary prime: truncated Iwasawa algebras over Z/p^n, sharp/flat
//! factorization of norm-compatible sequences through Sprung-type matrices,
//! finite-level logarithm matrices with denominator tracking, p-stabilized
//! theta elements, mock Coleman maps built from Q-system data,
//! admissible-prime classification, and finite-level reciprocity-congruence
//! checkers. Every construction is validated against an independent
//! brute-force route over the same finite rings; no floating point anywhere.
//!
//! The crate is `no_std` (alloc only); IO, file formats and the CLI live in
//! the companion `sharpflat-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod admissible;
pub mod coleman;
pub mod error;
pub mod euler;
pub mod howell;
pub mod logmatrix;
pub mod mat;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod selftest;
pub mod sprung;
pub mod theta;

pub use error::{Error, Result};
