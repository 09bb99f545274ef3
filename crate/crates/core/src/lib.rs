//! Unitary testers and their entropic uncertainty.
//!
//! A tester probes an unknown unitary `u` by sending a pure state through it
//! and measuring the result in an orthonormal basis. This crate computes
//! tester statistics, estimates the entropic bound of a tester pair by
//! searching the unitary group, checks orthogonal and mutually unbiased
//! unitary bases, and simulates two-way QKD protocols that use testers for
//! decoding.
//!
//! Conventions used everywhere:
//!
//! - Bipartite spaces are ordered `(system, ancilla)`; a unitary under test
//!   acts as `u ⊗ I` on bipartite inputs.
//! - `vectorize(u)` places `⟨j|u|i⟩` at the amplitude of `|i⟩|j⟩`.
//! - Entropies are in bits.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod error;
pub mod muub;
pub mod ppovm;
pub mod qkd;
pub mod qmath;
pub mod tester;
pub mod verify;

pub use error::{Error, Result};
pub use qmath::{ComplexMatrix, PureState, RngHandle, Unitary, C64};
