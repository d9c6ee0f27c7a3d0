//! Dense state-vector and density-operator layer.
//!
//! Qubit 0 is the most significant bit of a basis index everywhere in this
//! crate: on three qubits, index `0b100` is `|100⟩` with qubit 0 set.
//!
//! Global phase is never normalized away. Compare states with [`fidelity`]
//! rather than amplitude equality.

mod density;
mod gate;
mod measure;
mod state;

pub use density::{density_from_ensemble, DensityOperator};
pub use gate::GateOp;
pub use measure::{measure_qubit, project_qubit, Basis, MeasurementRecord};
pub use state::{bell_state, make_basis_state, BellKind, PureState};

pub use num_complex::Complex64;

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 12;

/// Tolerance for exact algebra (norms, unitarity, fidelities of exact constructions).
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for accumulated sums such as ensemble weights.
pub const SUM_TOL: f64 = 1e-9;

/// Smallest branch probability a forced projection accepts.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;

/// Anything a fidelity can be taken of against a pure target.
pub trait Fidelity {
    fn fidelity_with(&self, target: &PureState) -> crate::Result<f64>;
}

/// `⟨target|ρ|target⟩`, or `|⟨target|ψ⟩|²` for a pure input.
pub fn fidelity<S: Fidelity + ?Sized>(state: &S, target: &PureState) -> crate::Result<f64> {
    state.fidelity_with(target)
}
