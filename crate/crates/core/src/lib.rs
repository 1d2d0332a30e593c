//! Pulse-level generation of stabilizer Hamiltonians on always-on coupled qubit arrays.
//!
//! The crate is organised bottom-up: [`pauli`] holds the symplectic algebra, [`device`]
//! the physical array, [`toggling`] the pi-pulse frames that isolate one part of the
//! always-on Hamiltonian, [`compiler`] the nested conjugation schedules, [`sim`] the
//! dense simulator used to check all of the above, and [`encoder`] the measurement-free
//! codeword preparation and logical gates.

pub mod cli;
pub mod code;
pub mod compiler;
pub mod device;
pub mod encoder;
pub mod error;
pub mod pauli;
pub mod sim;
pub mod toggling;

pub use code::CodeSpec;
pub use compiler::{Schedule, ScheduleStep};
pub use device::{DeviceSpec, Edge, TimingBudget};
pub use error::{Error, Result};
pub use pauli::{Axis, Coupling, Pauli, PauliString, PauliSum};
pub use sim::StateVector;
