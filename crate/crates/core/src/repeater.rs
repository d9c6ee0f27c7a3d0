//! Repeater chains of ion-pair nodes.
//!
//! `n` segments of length `L0` are prepared one after another. Each attempt on
//! a segment succeeds with `p_s·e^{−α·L0}` and costs `t_c`. Once all segments
//! hold a pair, the middle nodes swap entanglement with a local CNOT and two
//! single-ion measurements. Swaps and storage are ideal and take no time.
//!
//! The photon survival factor `e^{−α·L0}` is called the channel transmission
//! here, to keep it apart from the collection efficiency of a link.

use rand::{Rng, RngCore};
use rand_distr::Geometric;
use rayon::prelude::*;

use crate::protocols::{EntanglingProtocol, ProtocolParams};
use crate::quantum::{
    bell_state, fidelity, measure_qubit, project_qubit, Basis, BellKind, GateOp, PureState,
};
use crate::rng::{substream, MeanAccumulator};
use crate::{Error, Result};

/// Segment preparation order. Only sequential preparation is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentSchedule {
    #[default]
    Sequential,
}

/// How the attempt count of one segment is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttemptSampler {
    /// One inverse-transform geometric draw per segment.
    #[default]
    Geometric,
    /// One Bernoulli draw per attempt.
    PerAttempt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterConfig {
    pub n_segments: u32,
    /// Segment length (km).
    pub l0_km: f64,
    /// Attenuation coefficient (1/km).
    pub alpha_per_km: f64,
    /// Heralding probability of the link protocol without channel loss.
    pub p_s: f64,
    /// Duration of one attempt (s).
    pub t_c: f64,
    pub trials: u64,
    pub seed: u64,
    pub schedule: SegmentSchedule,
    pub sampler: AttemptSampler,
    /// Fidelity multiplier applied per swap; 1 for ideal swaps.
    pub swap_fidelity: f64,
}

impl RepeaterConfig {
    pub fn new(n_segments: u32, l0_km: f64, alpha_per_km: f64, p_s: f64, t_c: f64) -> Self {
        RepeaterConfig {
            n_segments,
            l0_km,
            alpha_per_km,
            p_s,
            t_c,
            trials: 10_000,
            seed: 0,
            schedule: SegmentSchedule::Sequential,
            sampler: AttemptSampler::Geometric,
            swap_fidelity: 1.0,
        }
    }

    /// Takes `p_s` and `t_c` from a link protocol.
    pub fn from_protocol(
        protocol: &dyn EntanglingProtocol,
        params: &ProtocolParams,
        n_segments: u32,
        l0_km: f64,
        alpha_per_km: f64,
    ) -> Result<Self> {
        protocol.validate(params)?;
        let p_s = protocol.success_probability(params)?;
        Ok(RepeaterConfig::new(n_segments, l0_km, alpha_per_km, p_s, params.t_c))
    }

    /// `e^{−α·L0}`.
    pub fn channel_transmission(&self) -> f64 {
        (-self.alpha_per_km * self.l0_km).exp()
    }

    pub fn segment_success_prob(&self) -> Result<f64> {
        segment_success_prob(self.p_s, self.alpha_per_km, self.l0_km)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_segments == 0 {
            return Err(Error::validation("n", "need at least one segment"));
        }
        if !(self.t_c > 0.0 && self.t_c.is_finite()) {
            return Err(Error::validation("tc", format!("{} must be > 0", self.t_c)));
        }
        if !(0.0..=1.0).contains(&self.swap_fidelity) {
            return Err(Error::validation(
                "swap-fidelity",
                format!("{} is not in [0, 1]", self.swap_fidelity),
            ));
        }
        let p = self.segment_success_prob().map_err(|e| match e {
            Error::Domain { quantity, reason } => Error::Validation {
                field: quantity,
                reason,
            },
            other => other,
        })?;
        if p <= 0.0 {
            return Err(Error::validation(
                "alpha",
                "segment success probability underflows to 0",
            ));
        }
        Ok(())
    }
}

/// `p_s·e^{−α·L0}`.
pub fn segment_success_prob(p_s: f64, alpha_per_km: f64, l0_km: f64) -> Result<f64> {
    if !(p_s > 0.0 && p_s <= 1.0) {
        return Err(Error::domain("ps", format!("{p_s} is not in (0, 1]")));
    }
    if !(alpha_per_km >= 0.0 && alpha_per_km.is_finite()) {
        return Err(Error::domain("alpha", format!("{alpha_per_km} must be ≥ 0")));
    }
    if !(l0_km >= 0.0 && l0_km.is_finite()) {
        return Err(Error::domain("l0", format!("{l0_km} must be ≥ 0")));
    }
    Ok(p_s * (-alpha_per_km * l0_km).exp())
}

/// `n·e^{α·L0}·t_c/p_s`.
pub fn analytic_chain_time(config: &RepeaterConfig) -> Result<f64> {
    config.validate()?;
    Ok(f64::from(config.n_segments) * config.t_c / config.segment_success_prob()?)
}

/// `e^{n·α·L0}·t_c/p_s`: one link spanning the whole distance.
pub fn direct_transmission_time(config: &RepeaterConfig) -> Result<f64> {
    config.validate()?;
    let n = f64::from(config.n_segments);
    Ok((n * config.alpha_per_km * config.l0_km).exp() * config.t_c / config.p_s)
}

/// Bits read by one swap: `k` in X (0 is `|+⟩`), `k′` in Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapRecord {
    pub x_outcome: u8,
    pub z_outcome: u8,
    pub branch_probability: f64,
}

impl SwapRecord {
    /// `2·x + z`.
    pub fn branch_index(&self) -> usize {
        usize::from(self.x_outcome) * 2 + usize::from(self.z_outcome)
    }
}

fn check_swap_register(register: &PureState) -> Result<()> {
    if register.num_qubits() != 4 {
        return Err(Error::Argument(format!(
            "swap needs a 4-qubit register (A, k, k′, B), got {} qubits",
            register.num_qubits()
        )));
    }
    Ok(())
}

fn finish_swap(collapsed: PureState, x_outcome: u8, z_outcome: u8, p: f64) -> Result<(PureState, SwapRecord)> {
    let mut s = collapsed;
    // Frame for two (|01⟩+|10⟩)/√2 inputs: Z_B^x then X_B^(1−z)
    if x_outcome == 1 {
        s.apply_gate_in_place(&GateOp::z(), &[3])?;
    }
    if z_outcome == 0 {
        s.apply_gate_in_place(&GateOp::x(), &[3])?;
    }
    s.apply_gate_in_place(&GateOp::h(), &[1])?;
    let s = s.discard_qubit(2, z_outcome)?.discard_qubit(1, x_outcome)?;
    Ok((
        s,
        SwapRecord {
            x_outcome,
            z_outcome,
            branch_probability: p,
        },
    ))
}

fn swap_circuit(register: &PureState) -> Result<PureState> {
    check_swap_register(register)?;
    register.apply_gate(&GateOp::cnot(), &[1, 2])
}

/// Bell measurement on the middle qubits `k = 1`, `k′ = 2` of `(A, k, k′, B)`,
/// then the Pauli fix-up on `B`. Returns the `(A, B)` pair.
pub fn entanglement_swap(register: &PureState, rng: &mut dyn RngCore) -> Result<(PureState, SwapRecord)> {
    let s = swap_circuit(register)?;
    let (rx, s) = measure_qubit(&s, 1, Basis::X, rng)?;
    let (rz, s) = measure_qubit(&s, 2, Basis::Z, rng)?;
    finish_swap(s, rx.outcome, rz.outcome, rx.probability * rz.probability)
}

/// Forced-branch variant of [`entanglement_swap`].
pub fn entanglement_swap_branch(
    register: &PureState,
    x_outcome: u8,
    z_outcome: u8,
) -> Result<(PureState, SwapRecord)> {
    let s = swap_circuit(register)?;
    let (px, s) = project_qubit(&s, 1, Basis::X, x_outcome)?;
    let (pz, s) = project_qubit(&s, 2, Basis::Z, z_outcome)?;
    finish_swap(s, x_outcome, z_outcome, px * pz)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterResult {
    pub per_trial_times: Vec<f64>,
    pub mean_time: f64,
    pub time_std_error: f64,
    pub analytic_time: f64,
    pub direct_time: f64,
    /// Mean end-to-end fidelity with `(|01⟩+|10⟩)/√2`.
    pub final_fidelity: f64,
    pub fidelity_std_error: f64,
    /// Swap branch counts indexed by [`SwapRecord::branch_index`].
    pub swap_outcomes: [u64; 4],
    pub mean_attempts_per_segment: f64,
    pub attempts_std_error: f64,
}

fn segment_attempts(sampler: AttemptSampler, p: f64, rng: &mut dyn RngCore) -> Result<u64> {
    match sampler {
        AttemptSampler::Geometric => {
            let g = Geometric::new(p).map_err(|e| Error::Argument(e.to_string()))?;
            Ok(rng.sample(g).saturating_add(1))
        }
        AttemptSampler::PerAttempt => {
            let mut n = 1;
            while rng.random::<f64>() >= p {
                n += 1;
            }
            Ok(n)
        }
    }
}

struct Trial {
    time: f64,
    attempts: u64,
    fidelity: f64,
    branches: [u64; 4],
}

fn run_trial(config: &RepeaterConfig, p: f64, rng: &mut dyn RngCore) -> Result<Trial> {
    let mut attempts = 0u64;
    for _ in 0..config.n_segments {
        attempts += segment_attempts(config.sampler, p, rng)?;
    }
    let phi = bell_state(BellKind::PhiPlus01_10);
    let mut end_to_end = phi.clone();
    let mut branches = [0u64; 4];
    for _ in 1..config.n_segments {
        let register = end_to_end.tensor(&phi)?;
        let (pair, rec) = entanglement_swap(&register, rng)?;
        branches[rec.branch_index()] += 1;
        end_to_end = pair;
    }
    let swaps = config.n_segments.saturating_sub(1) as i32;
    Ok(Trial {
        time: attempts as f64 * config.t_c,
        attempts,
        fidelity: fidelity(&end_to_end, &phi)? * config.swap_fidelity.powi(swaps),
        branches,
    })
}

/// Monte Carlo over `config.trials` chains; trial `t` uses substream `(seed, t)`.
pub fn simulate_chain(config: &RepeaterConfig) -> Result<RepeaterResult> {
    config.validate()?;
    if config.trials == 0 {
        return Err(Error::Argument("trials must be ≥ 1".into()));
    }
    let p = config.segment_success_prob()?;
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, p, &mut substream(config.seed, t)))
        .collect::<Result<Vec<Trial>>>()?;

    let times: MeanAccumulator = trials.iter().map(|t| t.time).collect();
    let fidelities: MeanAccumulator = trials.iter().map(|t| t.fidelity).collect();
    let n = f64::from(config.n_segments);
    let attempts: MeanAccumulator = trials.iter().map(|t| t.attempts as f64 / n).collect();
    let mut swap_outcomes = [0u64; 4];
    for t in &trials {
        for (acc, c) in swap_outcomes.iter_mut().zip(t.branches) {
            *acc += c;
        }
    }
    Ok(RepeaterResult {
        per_trial_times: trials.iter().map(|t| t.time).collect(),
        mean_time: times.mean(),
        time_std_error: times.std_error(),
        analytic_time: analytic_chain_time(config)?,
        direct_time: direct_transmission_time(config)?,
        final_fidelity: fidelities.mean().clamp(0.0, 1.0),
        fidelity_std_error: fidelities.std_error(),
        swap_outcomes,
        mean_attempts_per_segment: attempts.mean(),
        attempts_std_error: attempts.std_error(),
    })
}
