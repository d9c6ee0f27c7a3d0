use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityOperator, Fidelity, EXACT_TOL, MAX_QUBITS, SUM_TOL};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Normalized amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Position of `qubit` within a basis index of an `num_qubits` register.
#[inline]
pub(crate) fn bit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub(crate) fn check_capacity(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: num_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Computational basis state `|basis_index⟩`.
pub fn make_basis_state(num_qubits: usize, basis_index: usize) -> Result<PureState> {
    check_capacity(num_qubits)?;
    let dim = 1usize << num_qubits;
    if basis_index >= dim {
        return Err(Error::Argument(format!(
            "basis index {basis_index} out of range for {num_qubits} qubits"
        )));
    }
    let mut amplitudes = vec![ZERO; dim];
    amplitudes[basis_index] = ONE;
    Ok(PureState {
        num_qubits,
        amplitudes,
    })
}

/// The two Bell states that appear as heralded resources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    /// `(|01⟩ + |10⟩)/√2`, the resource consumed by the remote CNOT and the swaps.
    PhiPlus01_10,
    /// `(|01⟩ − |10⟩)/√2`, heralded by a two-photon coincidence.
    PsiMinus01_10,
}

pub fn bell_state(kind: BellKind) -> PureState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let amplitudes = match kind {
        BellKind::PhiPlus01_10 => vec![ZERO, s, s, ZERO],
        BellKind::PsiMinus01_10 => vec![ZERO, s, -s, ZERO],
    };
    PureState {
        num_qubits: 2,
        amplitudes,
    }
}

impl PureState {
    /// Wraps an amplitude vector whose norm is already 1 within the summation
    /// tolerance. The stored vector is rescaled to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > SUM_TOL {
            return Err(Error::validation(
                "amplitudes",
                format!("norm² is {norm_sqr}, expected 1"),
            ));
        }
        Self::normalized(amplitudes)
    }

    /// Rescales any nonzero amplitude vector of length `2^n` to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Argument(format!(
                "amplitude vector length {dim} is not 2^n with n ≥ 1"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_capacity(num_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Argument("amplitude vector has zero norm".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(PureState {
            num_qubits,
            amplitudes,
        })
    }

    /// Haar-random state, drawn as a normalized complex Gaussian vector.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_capacity(num_qubits)?;
        let amplitudes = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Argument(format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`, with `other`'s qubits appended after `self`'s.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_capacity(num_qubits)?;
        let mut amplitudes = Vec::with_capacity(1 << num_qubits);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(PureState {
            num_qubits,
            amplitudes,
        })
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Argument(format!(
                "qubit {qubit} out of range for a {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Removes `qubit`, which must be in the computational state `|bit⟩`.
    pub fn discard_qubit(&self, qubit: usize, bit: u8) -> Result<PureState> {
        self.check_qubit(qubit)?;
        if self.num_qubits == 1 {
            return Err(Error::Argument("cannot discard the only qubit".into()));
        }
        let mask = bit_mask(self.num_qubits, qubit);
        let keep_set = bit != 0;
        let weight: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| (k & mask != 0) == keep_set)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if (weight - 1.0).abs() > SUM_TOL {
            return Err(Error::Precondition(format!(
                "qubit {qubit} is not in |{bit}⟩ (weight {weight})"
            )));
        }
        let high_mask = !(mask - 1) & !mask;
        let amplitudes: Vec<Complex64> = (0..self.dim() / 2)
            .map(|k| {
                let full = ((k << 1) & high_mask) | (k & (mask - 1));
                self.amplitudes[if keep_set { full | mask } else { full }]
            })
            .collect();
        PureState::normalized(amplitudes)
    }

    /// Reduced density operator on `keep`, in the order given.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator> {
        for (i, &q) in keep.iter().enumerate() {
            self.check_qubit(q)?;
            if keep[..i].contains(&q) {
                return Err(Error::Argument(format!("qubit {q} listed twice")));
            }
        }
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let sub_dim = 1usize << k;
        let env_dim = 1usize << traced.len();
        let compose = |sys: usize, env: usize| -> usize {
            let mut idx = 0;
            for (pos, &q) in keep.iter().enumerate() {
                if sys & (1 << (k - 1 - pos)) != 0 {
                    idx |= bit_mask(self.num_qubits, q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if env & (1 << (traced.len() - 1 - pos)) != 0 {
                    idx |= bit_mask(self.num_qubits, q);
                }
            }
            idx
        };
        let mut matrix = vec![ZERO; sub_dim * sub_dim];
        for env in 0..env_dim {
            for r in 0..sub_dim {
                let ar = self.amplitudes[compose(r, env)];
                if ar == ZERO {
                    continue;
                }
                for c in 0..sub_dim {
                    matrix[r * sub_dim + c] += ar * self.amplitudes[compose(c, env)].conj();
                }
            }
        }
        DensityOperator::from_row_major(k, matrix)
    }

    /// Phase-insensitive equality.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        match self.fidelity_with(other) {
            Ok(f) => (1.0 - f).abs() <= tol,
            Err(_) => false,
        }
    }

    pub(crate) fn from_raw_unchecked(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        PureState {
            num_qubits,
            amplitudes,
        }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub(crate) fn renormalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
    }

    pub(crate) fn debug_assert_normalized(&self) {
        debug_assert!((self.norm_sqr() - 1.0).abs() < EXACT_TOL * 10.0);
    }
}

impl Fidelity for PureState {
    fn fidelity_with(&self, target: &PureState) -> Result<f64> {
        Ok(target.inner(self)?.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::fidelity;

    #[test]
    fn basis_states() {
        let s = make_basis_state(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO]);
        let s = make_basis_state(2, 2).unwrap();
        assert_eq!(s.amplitudes()[0b10], ONE);
        assert_eq!(s.norm_sqr(), 1.0);
        let s = make_basis_state(4, 15).unwrap();
        assert_eq!(s.amplitudes()[15], ONE);
        assert_eq!(s.dim(), 16);
    }

    #[test]
    fn basis_state_errors() {
        assert!(matches!(make_basis_state(2, 4), Err(Error::Argument(_))));
        assert!(matches!(make_basis_state(0, 0), Err(Error::Capacity { .. })));
        assert!(matches!(
            make_basis_state(13, 0),
            Err(Error::Capacity { requested: 13, .. })
        ));
        assert!(make_basis_state(12, 4095).is_ok());
    }

    #[test]
    fn bell_amplitudes() {
        let phi = bell_state(BellKind::PhiPlus01_10);
        let s = FRAC_1_SQRT_2;
        let expect = [0.0, s, s, 0.0];
        for (a, e) in phi.amplitudes().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        let psi = bell_state(BellKind::PsiMinus01_10);
        assert!((psi.amplitudes()[2].re + s).abs() < 1e-15);
        assert!((fidelity(&phi, &phi).unwrap() - 1.0).abs() < EXACT_TOL);
        assert!(fidelity(&phi, &psi).unwrap().abs() < EXACT_TOL);
    }

    #[test]
    fn fidelity_of_bell_with_basis_state() {
        let phi = bell_state(BellKind::PhiPlus01_10);
        let s01 = make_basis_state(2, 1).unwrap();
        assert!((fidelity(&phi, &s01).unwrap() - 0.5).abs() < EXACT_TOL);
        let s1 = make_basis_state(1, 1).unwrap();
        assert!(fidelity(&phi, &s1).is_err());
    }

    #[test]
    fn tensor_orders_qubits() {
        let one = make_basis_state(1, 1).unwrap();
        let zero = make_basis_state(1, 0).unwrap();
        let s = one.tensor(&zero).unwrap();
        assert_eq!(s.amplitudes()[0b10], ONE);
    }

    #[test]
    fn discard_qubit_in_basis_state() {
        let s = make_basis_state(3, 0b101).unwrap();
        let r = s.discard_qubit(1, 0).unwrap();
        assert_eq!(r.amplitudes()[0b11], ONE);
        assert!(s.discard_qubit(1, 1).is_err());
        let phi = bell_state(BellKind::PhiPlus01_10);
        assert!(matches!(phi.discard_qubit(0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduced_density_of_bell_pair_is_maximally_mixed() {
        let phi = bell_state(BellKind::PhiPlus01_10);
        let rho = phi.reduced_density(&[1]).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < EXACT_TOL);
        assert!((m[(1, 1)].re - 0.5).abs() < EXACT_TOL);
        assert!(m[(0, 1)].norm() < EXACT_TOL);
        let full = phi.reduced_density(&[0, 1]).unwrap();
        assert!((full.fidelity_with(&phi).unwrap() - 1.0).abs() < EXACT_TOL);
        // reversed order swaps the qubits: |10⟩+|01⟩ is symmetric
        let swapped = phi.reduced_density(&[1, 0]).unwrap();
        assert!((swapped.fidelity_with(&phi).unwrap() - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized() {
        let v = vec![ONE, ONE];
        assert!(PureState::from_amplitudes(v.clone()).is_err());
        assert!(PureState::normalized(v).is_ok());
        assert!(PureState::normalized(vec![ONE, ONE, ONE]).is_err());
        assert!(PureState::normalized(vec![ZERO, ZERO]).is_err());
    }
}
