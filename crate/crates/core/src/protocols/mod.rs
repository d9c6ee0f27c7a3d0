//! Heralded entangling protocols.
//!
//! Each protocol implements [`EntanglingProtocol`] and is registered by name
//! in a [`ProtocolRegistry`]; callers pick one at runtime with
//! [`ProtocolRegistry::get`]. The built-in entries are `type1`
//! (single-photon interference) and `type2` (two-photon coincidence).

pub mod analytic;
mod coincidence;
mod interference;
mod params;
mod runner;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore};

pub use analytic::{
    collection_efficiency, detection_time, expected_entangle_time, strong_coupling_ratio,
    success_prob_type1, success_prob_type2, type1_fidelity_analytic,
};
pub use coincidence::Coincidence;
pub use interference::Interference;
pub use params::{Collection, ProtocolParams};
pub use runner::{count_successes, heralded_fidelity, run_batch, run_until_success, BatchSummary};

use crate::quantum::PureState;
use crate::{Error, Result};

/// State left on the two ancillas by a successful attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct Herald {
    pub state: PureState,
    /// The heralded state is a known contaminant rather than the target pair.
    pub error_flagged: bool,
}

/// Result of one or more entangling attempts.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangleOutcome {
    pub success: bool,
    pub attempts: u64,
    /// `attempts × t_c`.
    pub elapsed: f64,
    /// Two-qubit ancilla state, present iff `success`.
    pub state: Option<PureState>,
    pub error_flagged: bool,
}

impl EntangleOutcome {
    pub(crate) fn failure(attempts: u64, t_c: f64) -> Self {
        EntangleOutcome {
            success: false,
            attempts,
            elapsed: attempts as f64 * t_c,
            state: None,
            error_flagged: false,
        }
    }

    pub(crate) fn heralded(attempts: u64, t_c: f64, herald: Herald) -> Self {
        EntangleOutcome {
            success: true,
            attempts,
            elapsed: attempts as f64 * t_c,
            state: Some(herald.state),
            error_flagged: herald.error_flagged,
        }
    }
}

/// A probabilistic heralded entangling scheme.
pub trait EntanglingProtocol: fmt::Debug + Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Ideal two-qubit state the protocol heralds.
    fn target_state(&self) -> PureState;

    /// Strict parameter checks for sampling.
    fn validate(&self, params: &ProtocolParams) -> Result<()>;

    /// Probability that one attempt heralds success.
    fn success_probability(&self, params: &ProtocolParams) -> Result<f64>;

    /// Fidelity with [`target_state`](Self::target_state) of the heralded
    /// state averaged over the noise model.
    fn analytic_fidelity(&self, params: &ProtocolParams) -> Result<f64>;

    /// Draws the heralded state, conditioned on a success click.
    fn sample_herald(&self, params: &ProtocolParams, rng: &mut dyn RngCore) -> Result<Herald>;

    /// One attempt: success with [`success_probability`](Self::success_probability),
    /// then a heralded state on success.
    fn attempt(&self, params: &ProtocolParams, rng: &mut dyn RngCore) -> Result<EntangleOutcome> {
        self.validate(params)?;
        let p = self.success_probability(params)?;
        if rng.random::<f64>() < p {
            Ok(EntangleOutcome::heralded(1, params.t_c, self.sample_herald(params, rng)?))
        } else {
            Ok(EntangleOutcome::failure(1, params.t_c))
        }
    }
}

/// Single attempt of the interference protocol.
pub fn attempt_type1(params: &ProtocolParams, rng: &mut dyn RngCore) -> Result<EntangleOutcome> {
    Interference.attempt(params, rng)
}

/// Single attempt of the coincidence protocol.
pub fn attempt_type2(params: &ProtocolParams, rng: &mut dyn RngCore) -> Result<EntangleOutcome> {
    Coincidence.attempt(params, rng)
}

/// The built-in protocols as a closed enum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    TypeI,
    TypeII,
}

impl ProtocolKind {
    pub fn protocol(self) -> &'static dyn EntanglingProtocol {
        match self {
            ProtocolKind::TypeI => &Interference,
            ProtocolKind::TypeII => &Coincidence,
        }
    }

    pub fn name(self) -> &'static str {
        self.protocol().name()
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "type1" => Ok(ProtocolKind::TypeI),
            "type2" => Ok(ProtocolKind::TypeII),
            other => Err(Error::Unknown {
                kind: "protocol",
                name: other.to_string(),
            }),
        }
    }
}

/// Name → protocol lookup.
#[derive(Debug, Clone, Default)]
pub struct ProtocolRegistry {
    entries: BTreeMap<&'static str, Arc<dyn EntanglingProtocol>>,
}

impl ProtocolRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding `type1` and `type2`.
    pub fn with_builtin() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(Interference));
        registry.register(Arc::new(Coincidence));
        registry
    }

    /// Adds or replaces the entry under `protocol.name()`.
    pub fn register(&mut self, protocol: Arc<dyn EntanglingProtocol>) {
        self.entries.insert(protocol.name(), protocol);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn EntanglingProtocol>> {
        self.entries.get(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "protocol",
            name: name.to_string(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}
