//! Dense complex linear algebra for small dimensions.
//!
//! Bipartite operators are ordered `(system, ancilla)` and the operator-to-state
//! map follows `|u⟩⟩ = Σ_ij ⟨j|u|i⟩|i⟩|j⟩`.

pub mod gates;
mod literal;
mod matrix;
mod ops;
mod rng;
mod state;
mod unitary;

pub use literal::MatrixLiteral;
pub use matrix::ComplexMatrix;
pub use ops::{
    devectorize, gell_mann_basis, haar_random_unitary, haar_state_from, haar_unitary_from,
    partial_trace_ancilla, partial_trace_second, partial_transpose_first,
    partial_transpose_first_dims, swap_factors, swap_operator, tensor, unnormalized_mes,
    vectorize,
};
pub use rng::RngHandle;
pub use state::PureState;
pub(crate) use state::inner;
pub use unitary::Unitary;

pub type C64 = num_complex::Complex64;

/// Default tolerance for unitarity, normalization and orthonormality.
pub const UNIT_TOL: f64 = 1e-9;
