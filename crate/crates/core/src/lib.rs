//! Simulation of heralded photon-mediated entanglement between trapped-ion
//! qubits.
//!
//! - [`quantum`]: dense pure states, density operators, gates and measurement.
//! - [`protocols`]: the interference (`type1`) and coincidence (`type2`)
//!   entangling protocols behind a common [`protocols::EntanglingProtocol`]
//!   trait, selectable by name from a [`protocols::ProtocolRegistry`].
//! - [`gadget`]: the deterministic remote CNOT built from one heralded Bell
//!   pair, two local CNOTs, two ancilla measurements and a Pauli correction.
//! - [`repeater`]: sequential segment generation, entanglement swapping and
//!   time accounting along a repeater chain.
//! - [`rng`]: per-trial random substreams derived from a master seed.

pub mod error;
pub mod gadget;
pub mod protocols;
pub mod quantum;
pub mod repeater;
pub mod rng;

pub use error::{Error, Result};
