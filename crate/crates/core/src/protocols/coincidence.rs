use rand::RngCore;

use super::{analytic, EntanglingProtocol, Herald, ProtocolParams};
use crate::quantum::{bell_state, BellKind, PureState};
use crate::Result;

/// Two-photon coincidence: each ion emits one polarization-entangled photon,
/// a click on both detectors heralds `(|01⟩ − |10⟩)/√2`.
///
/// Both polarization components share each ion's motional phase, so position
/// noise cancels and the heralded state is exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct Coincidence;

impl EntanglingProtocol for Coincidence {
    fn name(&self) -> &'static str {
        "type2"
    }

    fn description(&self) -> &'static str {
        "two-photon coincidence, both detectors click, heralds |01⟩ − |10⟩"
    }

    fn target_state(&self) -> PureState {
        bell_state(BellKind::PsiMinus01_10)
    }

    fn validate(&self, params: &ProtocolParams) -> Result<()> {
        params.validate(false)
    }

    fn success_probability(&self, params: &ProtocolParams) -> Result<f64> {
        analytic::success_prob_type2(params)
    }

    fn analytic_fidelity(&self, params: &ProtocolParams) -> Result<f64> {
        params.validate_analytic()?;
        Ok(1.0)
    }

    fn sample_herald(&self, _params: &ProtocolParams, _rng: &mut dyn RngCore) -> Result<Herald> {
        Ok(Herald {
            state: self.target_state(),
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
    fn heralded_state_ignores_position_noise() {
        let target = Coincidence.target_state();
        for sigma_x in [0.0, 1e-9, 1e-6, 1e-3] {
            let params = ProtocolParams {
                delta_k: 1e7,
                sigma_x,
                ..ProtocolParams::cd111()
            };
            let h = Coincidence.sample_herald(&params, &mut substream(0, 0)).unwrap();
            assert!((fidelity(&h.state, &target).unwrap() - 1.0).abs() < EXACT_TOL);
            assert!(!h.error_flagged);
        }
    }

    #[test]
    fn zero_collection_never_succeeds() {
        let params = ProtocolParams {
            collection: Collection::Efficiency(0.0),
            ..ProtocolParams::cd111()
        };
        assert_eq!(Coincidence.success_probability(&params).unwrap(), 0.0);
        assert!(Coincidence.attempt(&params, &mut substream(0, 0)).is_err());
    }
}
