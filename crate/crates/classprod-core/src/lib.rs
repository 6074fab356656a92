//! Exact computational kernel: permutations, strong generating sets, matrices
//! over GF(p) for p in {2,3,5,7}, classical group constructors, and conjugacy
//! class arithmetic (products, commutators, centralizer orbits).
//!
//! The crate is `no_std` + `alloc`; everything IO-ish lives in the companion
//! `classprod` crate.
//!
//! Conventions, fixed once and used everywhere:
//! * permutations compose left-to-right: `compose(a, b)` maps `i` to `b(a(i))`;
//! * vectors are row vectors and matrices act on the right (`v * M`), so the
//!   map matrix -> permutation-of-vectors is a homomorphism under the above;
//! * conjugation is `g^s = s^-1 g s`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bsgs;
pub mod classes;
pub mod classical;
pub mod elements;
pub mod error;
pub mod flags;
pub mod gf;
pub mod matrix;
pub mod perm;

pub use bsgs::{BsgsGroup, ElementKey};
pub use classical::{Action, ClassicalGroup, Family, GroupSpec};
pub use error::Error;
pub use matrix::Mat;
pub use perm::Perm;
