use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::check_capacity;
use super::{Fidelity, PureState, EXACT_TOL, SUM_TOL};
use crate::{Error, Result};

const POSITIVITY_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite operator on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Builds from a row-major `2^n × 2^n` matrix and checks every invariant,
    /// including positivity.
    pub fn from_row_major(num_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if entries.len() != dim * dim {
            return Err(Error::validation(
                "matrix",
                format!("expected {} entries, got {}", dim * dim, entries.len()),
            ));
        }
        let rho = DensityOperator {
            num_qubits,
            matrix: DMatrix::from_row_slice(dim, dim, &entries),
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityOperator {
            num_qubits: state.num_qubits(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    fn check_hermitian_and_trace(&self) -> Result<()> {
        let dim = self.matrix.nrows();
        for r in 0..dim {
            for c in r..dim {
                let d = (self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm();
                if d > EXACT_TOL {
                    return Err(Error::validation(
                        "matrix",
                        format!("not Hermitian at ({r},{c}), deviation {d:e}"),
                    ));
                }
            }
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > EXACT_TOL {
            return Err(Error::validation("matrix", format!("trace is {tr}, expected 1")));
        }
        Ok(())
    }

    /// Hermiticity and unit trace within 1e-12, eigenvalues ≥ −1e-10.
    pub fn validate(&self) -> Result<()> {
        self.check_hermitian_and_trace()?;
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::validation(
                "matrix",
                format!("negative eigenvalue {min:e}"),
            ));
        }
        Ok(())
    }
}

impl Fidelity for DensityOperator {
    fn fidelity_with(&self, target: &PureState) -> Result<f64> {
        if target.num_qubits() != self.num_qubits {
            return Err(Error::Argument(format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits,
                target.num_qubits()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(target.amplitudes());
        let f = (v.adjoint() * &self.matrix * &v)[(0, 0)];
        Ok(f.re)
    }
}

/// `ρ = Σ w_k |ψ_k⟩⟨ψ_k|`. Weights must be nonnegative and sum to 1 within 1e-9;
/// the result is rescaled by the weight sum so its trace is exactly 1.
pub fn density_from_ensemble(members: &[(f64, PureState)]) -> Result<DensityOperator> {
    let Some((_, first)) = members.first() else {
        return Err(Error::validation("members", "ensemble is empty"));
    };
    let num_qubits = first.num_qubits();
    let mut total = 0.0;
    for (w, s) in members {
        if w.is_nan() || *w < 0.0 {
            return Err(Error::validation("weight", format!("{w} is negative")));
        }
        if s.num_qubits() != num_qubits {
            return Err(Error::Argument("ensemble members differ in size".into()));
        }
        total += w;
    }
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::validation("weight", format!("weights sum to {total}, not 1")));
    }
    let dim = 1usize << num_qubits;
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, s) in members {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        matrix += (&v * v.adjoint()) * Complex64::new(*w / total, 0.0);
    }
    let rho = DensityOperator { num_qubits, matrix };
    rho.check_hermitian_and_trace()?;
    Ok(rho)
}
