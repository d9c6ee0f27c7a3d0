//! Deterministic remote CNOT from a heralded ancilla pair.
//!
//! Logic ions `i`, `j` each sit next to an ancilla `i′`, `j′`. With the
//! ancillas sharing a Bell pair, the gadget applies the local CNOTs
//! `i → i′` and `j′ → j`, measures `i′` in Z and `j′` in X, and finishes with
//! one of `{I, Z_i, X_j, −Z_i X_j}` on the logic ions. Every branch leaves
//! `CNOT_{ij}|Ψ⟩` on the logic ions and any spectators.
//!
//! The correction table is written for outcomes measured against the pair
//! `(|00⟩ + |11⟩)/√2`. Other resources differ from it by a Pauli frame on the
//! ancillas ([`ResourceFrame`]); the frame is folded into the outcome labels
//! before the table lookup.

use rand::RngCore;

use crate::quantum::{
    bell_state, fidelity, measure_qubit, project_qubit, Basis, BellKind, GateOp, PureState,
    SUM_TOL,
};
use crate::{Error, Result};

/// Qubit indices of the four ions taking part, within one joint register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub logic_i: usize,
    pub logic_j: usize,
    pub ancilla_i: usize,
    pub ancilla_j: usize,
}

impl GadgetLayout {
    pub fn new(logic_i: usize, logic_j: usize, ancilla_i: usize, ancilla_j: usize) -> Self {
        GadgetLayout {
            logic_i,
            logic_j,
            ancilla_i,
            ancilla_j,
        }
    }

    /// Logic pair first, ancillas appended after `logic_qubits` qubits.
    pub fn appended(logic_qubits: usize) -> Self {
        GadgetLayout::new(0, 1, logic_qubits, logic_qubits + 1)
    }

    fn indices(&self) -> [usize; 4] {
        [self.logic_i, self.logic_j, self.ancilla_i, self.ancilla_j]
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let idx = self.indices();
        for (k, &q) in idx.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::Argument(format!(
                    "layout qubit {q} out of range for {num_qubits} qubits"
                )));
            }
            if idx[..k].contains(&q) {
                return Err(Error::Argument(format!("layout uses qubit {q} twice")));
            }
        }
        Ok(())
    }
}

/// Pauli fix-up on the logic ions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Correction {
    I,
    Zi,
    Xj,
    /// `−Z_i X_j`; the sign is a global phase and is not applied.
    ZiXjNeg,
}

impl Correction {
    pub const ALL: [Correction; 4] = [Correction::I, Correction::Zi, Correction::Xj, Correction::ZiXjNeg];

    pub fn has_z_on_i(self) -> bool {
        matches!(self, Correction::Zi | Correction::ZiXjNeg)
    }

    pub fn has_x_on_j(self) -> bool {
        matches!(self, Correction::Xj | Correction::ZiXjNeg)
    }

    /// Overall sign the table carries for this entry.
    pub fn sign(self) -> f64 {
        if self == Correction::ZiXjNeg {
            -1.0
        } else {
            1.0
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Correction::I => "I",
            Correction::Zi => "Zi",
            Correction::Xj => "Xj",
            Correction::ZiXjNeg => "-ZiXj",
        }
    }

    /// Its own inverse up to sign.
    fn apply(self, state: &mut PureState, logic_i: usize, logic_j: usize) -> Result<()> {
        if self.has_x_on_j() {
            state.apply_gate_in_place(&GateOp::x(), &[logic_j])?;
        }
        if self.has_z_on_i() {
            state.apply_gate_in_place(&GateOp::z(), &[logic_i])?;
        }
        Ok(())
    }
}

/// Correction for outcomes `(Z on i′, X on j′)`, with `0 ↔ |+⟩` for `j′`:
/// `0+ → I`, `0− → Z_i`, `1+ → X_j`, `1− → −Z_i X_j`.
pub fn outcome_correction(outcome_i: u8, outcome_j: u8) -> Correction {
    match (outcome_i & 1, outcome_j & 1) {
        (0, 0) => Correction::I,
        (0, _) => Correction::Zi,
        (_, 0) => Correction::Xj,
        _ => Correction::ZiXjNeg,
    }
}

/// Pauli offset of a resource pair from `(|00⟩ + |11⟩)/√2`: the pair equals
/// `Z_{i′}^z X_{j′}^x (|00⟩ + |11⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceFrame {
    pub x_on_j: bool,
    pub z_on_i: bool,
}

impl ResourceFrame {
    pub fn of(kind: BellKind) -> Self {
        match kind {
            BellKind::PhiPlus01_10 => ResourceFrame {
                x_on_j: true,
                z_on_i: false,
            },
            BellKind::PsiMinus01_10 => ResourceFrame {
                x_on_j: true,
                z_on_i: true,
            },
        }
    }

    /// Maps raw measured bits to table labels.
    pub fn labels(self, measured_i: u8, measured_j: u8) -> (u8, u8) {
        (measured_i ^ u8::from(self.x_on_j), measured_j ^ u8::from(self.z_on_i))
    }
}

/// What one gadget run measured and corrected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetRecord {
    /// Raw Z-basis bit read from ancilla `i′`.
    pub measured_i: u8,
    /// Raw X-basis bit read from ancilla `j′` (0 is `|+⟩`).
    pub measured_j: u8,
    /// Table label for `i′` after folding in the resource frame.
    pub outcome_i: u8,
    /// Table label for `j′` after folding in the resource frame.
    pub outcome_j: u8,
    pub correction: Correction,
    pub branch_probability: f64,
}

/// Gadget configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemoteCnot {
    /// Bell pair the ancillas are expected to hold.
    pub resource: BellKind,
    /// Reject registers whose ancillas are not in `resource` (fidelity below
    /// `1 − 1e-9`). With `strict` off an imperfect pair is consumed as is and
    /// its defects propagate to the logic ions.
    pub strict: bool,
}

impl Default for RemoteCnot {
    fn default() -> Self {
        RemoteCnot {
            resource: BellKind::PhiPlus01_10,
            strict: true,
        }
    }
}

impl RemoteCnot {
    pub fn noisy(resource: BellKind) -> Self {
        RemoteCnot {
            resource,
            strict: false,
        }
    }

    fn prepare(&self, register: &PureState, layout: &GadgetLayout) -> Result<PureState> {
        layout.validate(register.num_qubits())?;
        if self.strict {
            let rho = register.reduced_density(&[layout.ancilla_i, layout.ancilla_j])?;
            let f = fidelity(&rho, &bell_state(self.resource))?;
            if f < 1.0 - SUM_TOL {
                return Err(Error::Precondition(format!(
                    "ancillas are not in the {:?} resource (fidelity {f})",
                    self.resource
                )));
            }
        }
        let mut s = register.clone();
        let cnot = GateOp::cnot();
        s.apply_gate_in_place(&cnot, &[layout.logic_i, layout.ancilla_i])?;
        s.apply_gate_in_place(&cnot, &[layout.ancilla_j, layout.logic_j])?;
        Ok(s)
    }

    fn finish(
        &self,
        collapsed: PureState,
        layout: &GadgetLayout,
        measured_i: u8,
        measured_j: u8,
        branch_probability: f64,
    ) -> Result<(PureState, GadgetRecord)> {
        let (outcome_i, outcome_j) = ResourceFrame::of(self.resource).labels(measured_i, measured_j);
        let correction = outcome_correction(outcome_i, outcome_j);
        let mut s = collapsed;
        correction.apply(&mut s, layout.logic_i, layout.logic_j)?;
        // j′ is in |±⟩; rotate to |0⟩/|1⟩ so it can be dropped
        s.apply_gate_in_place(&GateOp::h(), &[layout.ancilla_j])?;
        let mut drops = [(layout.ancilla_i, measured_i), (layout.ancilla_j, measured_j)];
        drops.sort_by_key(|d| std::cmp::Reverse(d.0));
        for (q, bit) in drops {
            s = s.discard_qubit(q, bit)?;
        }
        Ok((
            s,
            GadgetRecord {
                measured_i,
                measured_j,
                outcome_i,
                outcome_j,
                correction,
                branch_probability,
            },
        ))
    }

    /// Samples the ancilla measurements. The returned register has the two
    /// ancillas removed; remaining qubits keep their relative order.
    pub fn run(
        &self,
        register: &PureState,
        layout: &GadgetLayout,
        rng: &mut dyn RngCore,
    ) -> Result<(PureState, GadgetRecord)> {
        let s = self.prepare(register, layout)?;
        let (rec_i, s) = measure_qubit(&s, layout.ancilla_i, Basis::Z, rng)?;
        let (rec_j, s) = measure_qubit(&s, layout.ancilla_j, Basis::X, rng)?;
        self.finish(
            s,
            layout,
            rec_i.outcome,
            rec_j.outcome,
            rec_i.probability * rec_j.probability,
        )
    }

    /// Forces the raw outcomes `(measured_i, measured_j)`.
    pub fn run_branch(
        &self,
        register: &PureState,
        layout: &GadgetLayout,
        measured_i: u8,
        measured_j: u8,
    ) -> Result<(PureState, GadgetRecord)> {
        let s = self.prepare(register, layout)?;
        let (p_i, s) = project_qubit(&s, layout.ancilla_i, Basis::Z, measured_i)?;
        let (p_j, s) = project_qubit(&s, layout.ancilla_j, Basis::X, measured_j)?;
        self.finish(s, layout, measured_i, measured_j, p_i * p_j)
    }
}

/// Remote CNOT in strict mode with the `(|01⟩ + |10⟩)/√2` resource.
pub fn remote_cnot(
    register: &PureState,
    layout: &GadgetLayout,
    rng: &mut dyn RngCore,
) -> Result<(PureState, GadgetRecord)> {
    RemoteCnot::default().run(register, layout, rng)
}

/// One forced branch of [`verify_identity_branches`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCheck {
    pub measured_i: u8,
    pub measured_j: u8,
    pub correction: Correction,
    pub probability: f64,
    /// `1 − F` against the direct CNOT.
    pub deviation: f64,
}

/// Checks all four branches of the gadget on `logic_state`, whose qubits 0
/// and 1 are the logic pair and whose remaining qubits are spectators.
pub fn verify_identity_branches(logic_state: &PureState) -> Result<[BranchCheck; 4]> {
    if logic_state.num_qubits() < 2 {
        return Err(Error::Argument("need at least the two logic qubits".into()));
    }
    let gadget = RemoteCnot::default();
    let expected = logic_state.apply_gate(&GateOp::cnot(), &[0, 1])?;
    let register = logic_state.tensor(&bell_state(gadget.resource))?;
    let layout = GadgetLayout::appended(logic_state.num_qubits());
    let mut checks = [BranchCheck {
        measured_i: 0,
        measured_j: 0,
        correction: Correction::I,
        probability: 0.0,
        deviation: 0.0,
    }; 4];
    for (k, check) in checks.iter_mut().enumerate() {
        let (mi, mj) = ((k >> 1) as u8, (k & 1) as u8);
        let (out, rec) = gadget.run_branch(&register, &layout, mi, mj)?;
        *check = BranchCheck {
            measured_i: mi,
            measured_j: mj,
            correction: rec.correction,
            probability: rec.branch_probability,
            deviation: 1.0 - fidelity(&out, &expected)?,
        };
    }
    Ok(checks)
}

/// Largest `1 − F` over the four branches.
pub fn verify_identity(logic_state: &PureState) -> Result<f64> {
    Ok(verify_identity_branches(logic_state)?
        .iter()
        .map(|c| c.deviation)
        .fold(0.0, f64::max))
}
