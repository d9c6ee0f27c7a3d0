use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::{EntangleOutcome, EntanglingProtocol, ProtocolParams};
use crate::quantum::fidelity;
use crate::rng::{substream, MeanAccumulator};
use crate::{Error, Result};

const ATTEMPT_CHUNK: u64 = 1 << 16;

/// Repeats attempts until one heralds success or `max_attempts` is reached.
/// Hitting the cap returns an unsuccessful outcome, not an error.
pub fn run_until_success(
    protocol: &dyn EntanglingProtocol,
    params: &ProtocolParams,
    rng: &mut dyn RngCore,
    max_attempts: u64,
) -> Result<EntangleOutcome> {
    if max_attempts == 0 {
        return Err(Error::Argument("max_attempts must be ≥ 1".into()));
    }
    protocol.validate(params)?;
    let p = protocol.success_probability(params)?;
    for attempt in 1..=max_attempts {
        if rng.random::<f64>() < p {
            let herald = protocol.sample_herald(params, rng)?;
            return Ok(EntangleOutcome::heralded(attempt, params.t_c, herald));
        }
    }
    Ok(EntangleOutcome::failure(max_attempts, params.t_c))
}

/// Number of heralded successes in `attempts` independent single attempts.
pub fn count_successes(
    protocol: &dyn EntanglingProtocol,
    params: &ProtocolParams,
    attempts: u64,
    seed: u64,
) -> Result<u64> {
    protocol.validate(params)?;
    let p = protocol.success_probability(params)?;
    let chunks = attempts.div_ceil(ATTEMPT_CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = substream(seed, chunk);
            let len = ATTEMPT_CHUNK.min(attempts - chunk * ATTEMPT_CHUNK);
            (0..len).filter(|_| rng.random::<f64>() < p).count() as u64
        })
        .sum())
}

/// Fidelity statistics of `samples` heralded states, contaminants included.
pub fn heralded_fidelity(
    protocol: &dyn EntanglingProtocol,
    params: &ProtocolParams,
    samples: u64,
    seed: u64,
) -> Result<MeanAccumulator> {
    let target = protocol.target_state();
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let herald = protocol.sample_herald(params, &mut substream(seed, i))?;
            fidelity(&herald.state, &target)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().collect())
}

/// Aggregate of independent `run_until_success` trials.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub trials: u64,
    pub successes: u64,
    /// Trials that hit the attempt cap.
    pub capped: u64,
    /// Successes whose heralded state was a flagged contaminant.
    pub flagged: u64,
    pub total_attempts: u64,
    /// Attempts per trial, capped trials included.
    pub attempts: MeanAccumulator,
    /// Time per trial.
    pub elapsed: MeanAccumulator,
    /// Fidelity of each successful trial's state with the protocol target.
    pub fidelity: MeanAccumulator,
}

impl BatchSummary {
    /// Per-attempt success probability estimate, successes / attempts.
    pub fn success_rate(&self) -> f64 {
        if self.total_attempts == 0 {
            0.0
        } else {
            self.successes as f64 / self.total_attempts as f64
        }
    }

    /// Standard error of [`success_rate`](Self::success_rate) from the
    /// geometric sampling model, `p̂·√((1 − p̂)/successes)`.
    pub fn success_rate_std_error(&self) -> f64 {
        if self.successes == 0 {
            return 0.0;
        }
        let p = self.success_rate();
        p * ((1.0 - p) / self.successes as f64).sqrt()
    }
}

/// `trials` independent runs; trial `t` draws from substream `(seed, t)`.
pub fn run_batch(
    protocol: &dyn EntanglingProtocol,
    params: &ProtocolParams,
    trials: u64,
    seed: u64,
    max_attempts: u64,
) -> Result<BatchSummary> {
    if trials == 0 {
        return Err(Error::Argument("trials must be ≥ 1".into()));
    }
    protocol.validate(params)?;
    let target = protocol.target_state();
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let out = run_until_success(protocol, params, &mut substream(seed, t), max_attempts)?;
            let fid = out
                .state
                .as_ref()
                .map(|s| fidelity(s, &target))
                .transpose()?;
            Ok((out.attempts, out.elapsed, fid, out.error_flagged))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summary = BatchSummary {
        trials,
        successes: 0,
        capped: 0,
        flagged: 0,
        total_attempts: 0,
        attempts: MeanAccumulator::default(),
        elapsed: MeanAccumulator::default(),
        fidelity: MeanAccumulator::default(),
    };
    for (attempts, elapsed, fid, flagged) in per_trial {
        summary.total_attempts += attempts;
        summary.attempts.push(attempts as f64);
        summary.elapsed.push(elapsed);
        match fid {
            Some(f) => {
                summary.successes += 1;
                summary.fidelity.push(f);
            }
            None => summary.capped += 1,
        }
        summary.flagged += u64::from(flagged);
    }
    Ok(summary)
}
