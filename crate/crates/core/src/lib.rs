//! Exact cellular chains on the associahedra `K_n` and their cubical
//! subdivisions `W_n`.
//!
//! The crate realizes the dg-operads `C_*(K)` and `C_*(W)` with integer
//! coefficients, the chain maps `q: C_*(K) -> C_*(W)` and
//! `p: C_*(W) -> C_*(K)`, the Saneblidze-Umble diagonal
//! `(p ⊗ p) ∘ Δ_W ∘ q`, the tensor product of A∞-algebras it induces, and an
//! exact search showing that no co-associative diagonal exists in arity 4.
//!
//! Everything is exact: chain coefficients are `i64`, algebra coefficients are
//! arbitrary-precision rationals. The crate is `no_std` (with `alloc`) when the
//! default `std` feature is disabled.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod tree;
pub mod chain;
pub mod orientation;
pub mod transfer;
pub mod diagonal;
pub mod linalg;
pub mod homology;
pub mod coassoc;
pub mod ainfinity;
pub mod verify;
