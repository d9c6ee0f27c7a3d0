use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::state::bit_mask;
use super::{PureState, EXACT_TOL};
use crate::{Error, Result};

/// A one- or two-qubit unitary, stored row-major.
///
/// For two-qubit gates the first target is the more significant qubit of the
/// 4×4 matrix, so `cnot()` on targets `[c, t]` uses `c` as control.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    name: &'static str,
    arity: usize,
    matrix: Vec<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl GateOp {
    /// Validates shape and unitarity (`U†U = I` within 1e-12).
    pub fn new(name: &'static str, arity: usize, matrix: Vec<Complex64>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::validation("arity", format!("{arity} is not 1 or 2")));
        }
        let dim = 1 << arity;
        if matrix.len() != dim * dim {
            return Err(Error::validation(
                "matrix",
                format!("expected {} entries, got {}", dim * dim, matrix.len()),
            ));
        }
        for r in 0..dim {
            for col in 0..dim {
                let entry: Complex64 = (0..dim)
                    .map(|k| matrix[k * dim + r].conj() * matrix[k * dim + col])
                    .sum();
                let expect = if r == col { 1.0 } else { 0.0 };
                if (entry - c(expect)).norm() > EXACT_TOL {
                    return Err(Error::validation(
                        "matrix",
                        format!("gate `{name}` is not unitary (U†U[{r},{col}] = {entry})"),
                    ));
                }
            }
        }
        Ok(GateOp {
            name,
            arity,
            matrix,
        })
    }

    fn fixed(name: &'static str, arity: usize, matrix: Vec<Complex64>) -> Self {
        GateOp {
            name,
            arity,
            matrix,
        }
    }

    pub fn identity(arity: usize) -> Result<Self> {
        let dim = 1usize << arity.min(2);
        let matrix = (0..dim * dim)
            .map(|k| if k / dim == k % dim { c(1.0) } else { c(0.0) })
            .collect();
        GateOp::new("I", arity, matrix)
    }

    pub fn x() -> Self {
        GateOp::fixed("X", 1, vec![c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    pub fn z() -> Self {
        GateOp::fixed("Z", 1, vec![c(1.0), c(0.0), c(0.0), c(-1.0)])
    }

    pub fn h() -> Self {
        let s = FRAC_1_SQRT_2;
        GateOp::fixed("H", 1, vec![c(s), c(s), c(s), c(-s)])
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> Self {
        GateOp::fixed(
            "P",
            1,
            vec![c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, phi)],
        )
    }

    pub fn cnot() -> Self {
        let mut m = vec![c(0.0); 16];
        m[0] = c(1.0);
        m[5] = c(1.0);
        m[11] = c(1.0);
        m[14] = c(1.0);
        GateOp::fixed("CNOT", 2, m)
    }

    pub fn name(&self) -> &str {
        self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }
}

impl PureState {
    /// Applies `gate` on `targets` (identity elsewhere).
    pub fn apply_gate(&self, gate: &GateOp, targets: &[usize]) -> Result<PureState> {
        let mut out = self.clone();
        out.apply_gate_in_place(gate, targets)?;
        Ok(out)
    }

    pub fn apply_gate_in_place(&mut self, gate: &GateOp, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity {
            return Err(Error::Argument(format!(
                "gate `{}` acts on {} qubits, got {} targets",
                gate.name,
                gate.arity,
                targets.len()
            )));
        }
        for (i, &q) in targets.iter().enumerate() {
            self.check_qubit(q)?;
            if targets[..i].contains(&q) {
                return Err(Error::Argument(format!("duplicate target qubit {q}")));
            }
        }
        let n = self.num_qubits();
        let masks: Vec<usize> = targets.iter().map(|&q| bit_mask(n, q)).collect();
        let all_targets: usize = masks.iter().sum();
        let sub = 1usize << gate.arity;
        // offsets[s]: basis-index bits for local sub-index s (target 0 most significant)
        let offsets: Vec<usize> = (0..sub)
            .map(|s| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| s & (1 << (gate.arity - 1 - pos)) != 0)
                    .map(|(_, m)| *m)
                    .sum()
            })
            .collect();
        let amps = self.amplitudes_mut();
        let mut local = [Complex64::new(0.0, 0.0); 4];
        for base in 0..amps.len() {
            if base & all_targets != 0 {
                continue;
            }
            for s in 0..sub {
                local[s] = amps[base | offsets[s]];
            }
            for r in 0..sub {
                amps[base | offsets[r]] = (0..sub)
                    .map(|col| gate.matrix[r * sub + col] * local[col])
                    .sum();
            }
        }
        self.debug_assert_normalized();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{fidelity, make_basis_state};

    #[test]
    fn pauli_flip() {
        let s = make_basis_state(1, 0).unwrap().apply_gate(&GateOp::x(), &[0]).unwrap();
        assert_eq!(s, make_basis_state(1, 1).unwrap());
    }

    #[test]
    fn cnot_truth_table() {
        let s = make_basis_state(2, 0b10).unwrap();
        let out = s.apply_gate(&GateOp::cnot(), &[0, 1]).unwrap();
        assert_eq!(out, make_basis_state(2, 0b11).unwrap());
        // reversed control
        let out = s.apply_gate(&GateOp::cnot(), &[1, 0]).unwrap();
        assert_eq!(out, s);
        // control on the less significant qubit of a 3-qubit register
        let s = make_basis_state(3, 0b001).unwrap();
        let out = s.apply_gate(&GateOp::cnot(), &[2, 0]).unwrap();
        assert_eq!(out, make_basis_state(3, 0b101).unwrap());
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = GateOp::h();
        let s = make_basis_state(1, 0).unwrap();
        let back = s.apply_gate(&h, &[0]).unwrap().apply_gate(&h, &[0]).unwrap();
        assert!((fidelity(&back, &s).unwrap() - 1.0).abs() < EXACT_TOL);
        assert!((back.amplitudes()[0].re - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn rejects_bad_targets_and_non_unitaries() {
        let s = make_basis_state(2, 0).unwrap();
        assert!(s.apply_gate(&GateOp::cnot(), &[0, 0]).is_err());
        assert!(s.apply_gate(&GateOp::cnot(), &[0, 2]).is_err());
        assert!(s.apply_gate(&GateOp::cnot(), &[0]).is_err());
        let bad = vec![c(1.0), c(1.0), c(0.0), c(1.0)];
        assert!(matches!(
            GateOp::new("bad", 1, bad),
            Err(Error::Validation { field: "matrix", .. })
        ));
        assert!(GateOp::new("short", 2, vec![c(1.0); 4]).is_err());
        assert!(GateOp::new("phase", 1, GateOp::phase(0.3).matrix().to_vec()).is_ok());
    }
}
