use rand::Rng;

use super::state::bit_mask;
use super::{GateOp, PureState, MIN_BRANCH_PROBABILITY};
use crate::{Error, Result};

/// Single-qubit measurement basis: `Z` is `{|0⟩,|1⟩}`, `X` is `{|+⟩,|−⟩}`.
/// In `X`, outcome 0 is `|+⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub basis: Basis,
    pub outcome: u8,
    pub probability: f64,
}

fn z_projection(state: &mut PureState, qubit: usize, outcome: u8) -> f64 {
    let mask = bit_mask(state.num_qubits(), qubit);
    let keep_set = outcome != 0;
    let mut prob = 0.0;
    for (k, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if (k & mask != 0) == keep_set {
            prob += a.norm_sqr();
        } else {
            *a = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    prob
}

impl PureState {
    /// Born probabilities of outcomes 0 and 1.
    pub fn branch_probabilities(&self, qubit: usize, basis: Basis) -> Result<[f64; 2]> {
        self.check_qubit(qubit)?;
        let rotated;
        let s = match basis {
            Basis::Z => self,
            Basis::X => {
                rotated = self.apply_gate(&GateOp::h(), &[qubit])?;
                &rotated
            }
        };
        let mask = bit_mask(s.num_qubits(), qubit);
        let mut probs = [0.0; 2];
        for (k, a) in s.amplitudes().iter().enumerate() {
            probs[usize::from(k & mask != 0)] += a.norm_sqr();
        }
        Ok(probs)
    }
}

/// Forced projection onto `outcome`. Returns the branch probability and the
/// renormalized collapsed state.
pub fn project_qubit(
    state: &PureState,
    qubit: usize,
    basis: Basis,
    outcome: u8,
) -> Result<(f64, PureState)> {
    state.check_qubit(qubit)?;
    if outcome > 1 {
        return Err(Error::Argument(format!("outcome {outcome} is not a bit")));
    }
    let h = GateOp::h();
    let mut s = match basis {
        Basis::Z => state.clone(),
        Basis::X => state.apply_gate(&h, &[qubit])?,
    };
    let probability = z_projection(&mut s, qubit, outcome);
    if probability < MIN_BRANCH_PROBABILITY {
        return Err(Error::Projection {
            qubit,
            outcome,
            probability,
        });
    }
    s.renormalize();
    if basis == Basis::X {
        s.apply_gate_in_place(&h, &[qubit])?;
    }
    Ok((probability.min(1.0), s))
}

/// Samples an outcome with Born probabilities and collapses the state.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    basis: Basis,
    rng: &mut R,
) -> Result<(MeasurementRecord, PureState)> {
    let [p0, _] = state.branch_probabilities(qubit, basis)?;
    let outcome = if rng.random::<f64>() < p0 { 0 } else { 1 };
    let (probability, collapsed) = project_qubit(state, qubit, basis, outcome)?;
    Ok((
        MeasurementRecord {
            qubit,
            basis,
            outcome,
            probability,
        },
        collapsed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell_state, fidelity, make_basis_state, BellKind, EXACT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> PureState {
        make_basis_state(1, 0).unwrap().apply_gate(&GateOp::h(), &[0]).unwrap()
    }

    #[test]
    fn equal_superposition_in_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (rec, post) = measure_qubit(&plus(), 0, Basis::Z, &mut rng).unwrap();
        assert!((rec.probability - 0.5).abs() < EXACT_TOL);
        assert_eq!(post, make_basis_state(1, rec.outcome as usize).unwrap());
        // |+⟩ in X is deterministic
        let (rec, post) = measure_qubit(&plus(), 0, Basis::X, &mut rng).unwrap();
        assert_eq!(rec.outcome, 0);
        assert!((rec.probability - 1.0).abs() < EXACT_TOL);
        assert!((fidelity(&post, &plus()).unwrap() - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn eigenstate_is_unchanged() {
        let s = make_basis_state(2, 0b10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (rec, post) = measure_qubit(&s, 0, Basis::Z, &mut rng).unwrap();
        assert_eq!(rec.outcome, 1);
        assert_eq!(rec.probability, 1.0);
        assert_eq!(post, s);
    }

    #[test]
    fn bell_marginal_projection() {
        let phi = bell_state(BellKind::PhiPlus01_10);
        let (p, post) = project_qubit(&phi, 0, Basis::Z, 0).unwrap();
        assert!((p - 0.5).abs() < EXACT_TOL);
        assert!((fidelity(&post, &make_basis_state(2, 0b01).unwrap()).unwrap() - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn zero_probability_branch_is_an_error() {
        let s = make_basis_state(1, 0).unwrap();
        assert!(matches!(
            project_qubit(&s, 0, Basis::Z, 1),
            Err(Error::Projection { qubit: 0, outcome: 1, .. })
        ));
        assert!(project_qubit(&s, 1, Basis::Z, 0).is_err());
        assert!(project_qubit(&s, 0, Basis::Z, 2).is_err());
    }
}
