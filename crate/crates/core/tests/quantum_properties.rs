use ionnet_core::quantum::{
    density_from_ensemble, fidelity, project_qubit, Basis, GateOp, PureState, EXACT_TOL,
};
use ionnet_core::rng::substream;
use proptest::prelude::*;

fn random_state(n: usize, seed: u64) -> PureState {
    PureState::random(n, &mut substream(seed, n as u64)).unwrap()
}

fn gate_pool() -> Vec<GateOp> {
    vec![GateOp::x(), GateOp::z(), GateOp::h(), GateOp::phase(0.37), GateOp::cnot()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gates_preserve_the_norm(
        n in 2usize..7,
        seed: u64,
        ops in prop::collection::vec((0usize..5, 0usize..64, 0usize..64), 1..40),
    ) {
        let pool = gate_pool();
        let mut s = random_state(n, seed);
        for (g, a, b) in ops {
            let gate = &pool[g];
            let (a, b) = (a % n, b % n);
            let targets: Vec<usize> = if gate.arity() == 1 { vec![a] } else if a != b { vec![a, b] } else { continue };
            s = s.apply_gate(gate, &targets).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn outcome_probabilities_sum_to_one(n in 1usize..8, seed: u64, q in 0usize..8) {
        let s = random_state(n, seed);
        let q = q % n;
        for basis in [Basis::Z, Basis::X] {
            let [p0, p1] = s.branch_probabilities(q, basis).unwrap();
            prop_assert!((p0 + p1 - 1.0).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn x_measurement_is_hadamard_then_z(n in 1usize..7, seed: u64, q in 0usize..7) {
        let s = random_state(n, seed);
        let q = q % n;
        let rotated = s.apply_gate(&GateOp::h(), &[q]).unwrap();
        for outcome in 0..2u8 {
            let (px, _) = project_qubit(&s, q, Basis::X, outcome).unwrap();
            let (pz, _) = project_qubit(&rotated, q, Basis::Z, outcome).unwrap();
            prop_assert!((px - pz).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn identity_gate_is_a_no_op(n in 2usize..7, seed: u64, a in 0usize..7, b in 0usize..7) {
        let s = random_state(n, seed);
        let one = s.apply_gate(&GateOp::identity(1).unwrap(), &[a % n]).unwrap();
        prop_assert!((fidelity(&one, &s).unwrap() - 1.0).abs() < EXACT_TOL);
        let (a, b) = (a % n, b % n);
        if a != b {
            let two = s.apply_gate(&GateOp::identity(2).unwrap(), &[a, b]).unwrap();
            for (x, y) in two.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((x - y).norm() < EXACT_TOL);
            }
        }
    }

    #[test]
    fn ensembles_are_valid_density_operators(
        n in 1usize..4,
        seed: u64,
        raw in prop::collection::vec(0.0f64..1.0, 1..6),
    ) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let members: Vec<(f64, PureState)> = raw
            .iter()
            .enumerate()
            .map(|(k, w)| (w / total, random_state(n, seed.wrapping_add(k as u64))))
            .collect();
        let rho = density_from_ensemble(&members).unwrap();
        prop_assert!(rho.validate().is_ok());
        prop_assert!((rho.trace().re - 1.0).abs() < EXACT_TOL);
        let f = fidelity(&rho, &members[0].1).unwrap();
        prop_assert!((-EXACT_TOL..=1.0 + EXACT_TOL).contains(&f));
    }
}
