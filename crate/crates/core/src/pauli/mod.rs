//! Signed Pauli strings, real Pauli sums, and their exact conjugation maps.

mod conjugate;
mod string;
mod sum;

pub(crate) use conjugate::cos_sin;
pub use conjugate::{coupling_conjugate, pauli_rotation_conjugate, rotate_conjugate, Coupling};
pub use string::{Axis, Pauli, PauliString, MAX_QUBITS};
pub use sum::{PauliSum, DEFAULT_TOLERANCE};
