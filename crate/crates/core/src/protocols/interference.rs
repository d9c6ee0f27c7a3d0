use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use super::{analytic, EntanglingProtocol, Herald, ProtocolParams};
use crate::quantum::{bell_state, make_basis_state, BellKind, PureState};
use crate::Result;

/// Single-photon interference: weak excitation of both ions, emission mixed
/// on a beam splitter, one detector click heralds `(|01⟩ + e^{iφ}|10⟩)/√2`.
///
/// Conditioned on a click, both ions decayed with probability `p_e` and one
/// photon went undetected; the pair is then `|11⟩` and the herald is flagged.
/// The phase `φ` is Gaussian with RMS [`ProtocolParams::sigma_phi`] around a
/// balanced interferometer.
#[derive(Debug, Clone, Copy, Default)]
pub struct Interference;

/// `(|01⟩ + e^{iφ}|10⟩)/√2`.
pub fn interference_state(phi: f64) -> PureState {
    let zero = Complex64::new(0.0, 0.0);
    let s = FRAC_1_SQRT_2;
    PureState::from_raw_unchecked(
        2,
        vec![zero, Complex64::new(s, 0.0), Complex64::from_polar(s, phi), zero],
    )
}

impl EntanglingProtocol for Interference {
    fn name(&self) -> &'static str {
        "type1"
    }

    fn description(&self) -> &'static str {
        "single-photon interference, one click heralds |01⟩ + e^{iφ}|10⟩"
    }

    fn target_state(&self) -> PureState {
        bell_state(BellKind::PhiPlus01_10)
    }

    fn validate(&self, params: &ProtocolParams) -> Result<()> {
        params.validate(true)
    }

    fn success_probability(&self, params: &ProtocolParams) -> Result<f64> {
        analytic::success_prob_type1(params)
    }

    fn analytic_fidelity(&self, params: &ProtocolParams) -> Result<f64> {
        params.validate_analytic()?;
        analytic::type1_fidelity_analytic(params.sigma_phi(), params.p_e)
    }

    fn sample_herald(&self, params: &ProtocolParams, rng: &mut dyn RngCore) -> Result<Herald> {
        params.validate_analytic()?;
        if rng.random::<f64>() < params.p_e {
            return Ok(Herald {
                state: make_basis_state(2, 0b11)?,
                error_flagged: true,
            });
        }
        let sigma = params.sigma_phi();
        let phi = if sigma > 0.0 {
            sigma * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        Ok(Herald {
            state: interference_state(phi),
            error_flagged: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Collection;
    use crate::quantum::{fidelity, EXACT_TOL};
    use crate::rng::substream;

    #[test]
    fn noiseless_herald_is_the_bell_pair() {
        let params = ProtocolParams {
            p_e: 0.0,
            ..ProtocolParams::cd111()
        };
        let mut rng = substream(1, 0);
        for _ in 0..100 {
            let h = Interference.sample_herald(&params, &mut rng).unwrap();
            assert!(!h.error_flagged);
            assert_eq!(h.state, bell_state(BellKind::PhiPlus01_10));
        }
    }

    #[test]
    fn contaminant_is_flagged() {
        let params = ProtocolParams {
            p_e: 1.0,
            ..ProtocolParams::cd111()
        };
        let h = Interference.sample_herald(&params, &mut substream(1, 0)).unwrap();
        assert!(h.error_flagged);
        let target = Interference.target_state();
        assert!(fidelity(&h.state, &target).unwrap() < EXACT_TOL);
    }

    #[test]
    fn phase_state_fidelity() {
        let target = Interference.target_state();
        for phi in [0.0, 0.4, 1.0, 3.0] {
            let f = fidelity(&interference_state(phi), &target).unwrap();
            assert!((f - (1.0 + f64::cos(phi)) / 2.0).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn attempt_bookkeeping() {
        let params = ProtocolParams {
            p_e: 0.5,
            collection: Collection::Efficiency(1.0),
            eta_d: 1.0,
            t_c: 1e-6,
            ..ProtocolParams::cd111()
        };
        let mut rng = substream(2, 0);
        let mut seen_success = false;
        for _ in 0..64 {
            let out = Interference.attempt(&params, &mut rng).unwrap();
            assert_eq!(out.attempts, 1);
            assert_eq!(out.elapsed, 1e-6);
            assert_eq!(out.success, out.state.is_some());
            seen_success |= out.success;
        }
        assert!(seen_success);
        let bad = ProtocolParams { p_e: 0.0, ..params };
        assert!(Interference.attempt(&bad, &mut rng).is_err());
    }
}
