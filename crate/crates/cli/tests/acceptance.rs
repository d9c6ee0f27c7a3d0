//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::ExitCode;
use std::time::Instant;

use ionnet_core::gadget::verify_identity_branches;
use ionnet_core::protocols::{
    analytic, count_successes, heralded_fidelity, run_batch, type1_fidelity_analytic, Coincidence,
    Collection, EntanglingProtocol, Interference, ProtocolParams,
};
use ionnet_core::quantum::{
    bell_state, density_from_ensemble, fidelity, make_basis_state, BellKind, PureState,
};
use ionnet_core::repeater::{simulate_chain, RepeaterConfig};
use ionnet_core::rng::substream;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn link(p_e: f64, p_c: f64, eta_d: f64) -> ProtocolParams {
    ProtocolParams {
        p_e,
        collection: Collection::Efficiency(p_c),
        eta_d,
        ..ProtocolParams::cd111()
    }
}

fn gadget_inputs() -> Result<Vec<PureState>, String> {
    let mut states: Vec<PureState> = (0..4)
        .map(|k| make_basis_state(2, k))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut rng = substream(2024, 0);
    for _ in 0..100 {
        states.push(PureState::random(2, &mut rng).map_err(err)?);
    }
    for _ in 0..20 {
        states.push(PureState::random(3, &mut rng).map_err(err)?);
    }
    Ok(states)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for s in gadget_inputs()? {
        for b in verify_identity_branches(&s).map_err(err)? {
            worst = worst.max(b.deviation);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst <= 1e-12 && secs < 5.0,
        format!("124 inputs, max 1-F = {worst:.3e}, {secs:.2} s"),
    )
}

fn criterion_2() -> Check {
    let mut worst = 0.0f64;
    for s in gadget_inputs()? {
        for b in verify_identity_branches(&s).map_err(err)? {
            worst = worst.max((b.probability - 0.25).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max |p - 1/4| = {worst:.3e}"))
}

fn frequency_check(
    protocol: &dyn EntanglingProtocol,
    params: &ProtocolParams,
    expect: f64,
    seed: u64,
) -> Result<(bool, String), String> {
    let n = 1_000_000u64;
    let p = protocol.success_probability(params).map_err(err)?;
    if (p - expect).abs() > 1e-15 {
        return Ok((false, format!("analytic {p} != {expect}")));
    }
    let hits = count_successes(protocol, params, n, seed).map_err(err)? as f64;
    let sigma = (n as f64 * expect * (1.0 - expect)).sqrt();
    let z = (hits - n as f64 * expect) / sigma;
    Ok((z.abs() < 4.0, format!("{} {}: {:.6e} ({z:+.2} sigma)", protocol.name(), expect, hits / n as f64)))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let (ok, detail) = frequency_check(&Interference, &link(0.1, 0.5, 0.5), 1.25e-2, 3)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(ok && secs < 10.0, format!("{detail}, {secs:.2} s"))
}

fn criterion_4() -> Check {
    let plain = link(0.01, 0.5, 0.5);
    let pbs = ProtocolParams {
        pbs_variant: true,
        ..plain.clone()
    };
    let (a, da) = frequency_check(&Coincidence, &plain, 7.8125e-3, 4)?;
    let (b, db) = frequency_check(&Coincidence, &pbs, 3.125e-2, 5)?;
    ensure(a && b, format!("{da}; pbs {db}"))
}

fn criterion_5() -> Check {
    let params = link(0.02, 1.0, 1.0);
    let p = Interference.success_probability(&params).map_err(err)?;
    let s = run_batch(&Interference, &params, 100_000, 6, u64::MAX).map_err(err)?;
    let mean = s.attempts.mean();
    ensure(
        (p - 0.01).abs() < 1e-15 && (mean / 100.0 - 1.0).abs() < 0.01,
        format!("p_s {p}, mean attempts {mean:.3} +- {:.3}", s.attempts.std_error()),
    )
}

/// Composite Simpson rule for the Gaussian average of (1 + cos φ)/2 over ±12σ.
fn dephasing_quadrature(sigma: f64) -> f64 {
    let steps = 20_000;
    let (a, b) = (-12.0 * sigma, 12.0 * sigma);
    let h = (b - a) / steps as f64;
    let f = |phi: f64| {
        let density =
            (-phi * phi / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        density * (1.0 + phi.cos()) / 2.0
    };
    let inner: f64 = (1..steps)
        .map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h))
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn criterion_6() -> Check {
    let oracle = dephasing_quadrature(1.0);
    let params = ProtocolParams {
        sigma_phi_override: Some(1.0),
        ..link(0.0, 1.0, 1.0)
    };
    let analytic = Interference.analytic_fidelity(&params).map_err(err)?;
    let f = heralded_fidelity(&Interference, &params, 200_000, 7).map_err(err)?;
    let z = (f.mean() - 0.803265) / f.std_error();
    ensure(
        (oracle - 0.803265).abs() < 5e-7 && (analytic - oracle).abs() < 1e-9 && z.abs() < 3.0,
        format!(
            "quadrature {oracle:.7}, analytic {analytic:.7}, MC {:.6} +- {:.1e} ({z:+.2} SE)",
            f.mean(),
            f.std_error()
        ),
    )
}

fn criterion_7() -> Check {
    let p_e = 0.05;
    let params = ProtocolParams {
        sigma_phi_override: Some(0.0),
        ..link(p_e, 1.0, 1.0)
    };
    let target = bell_state(BellKind::PhiPlus01_10);
    let contaminant = make_basis_state(2, 3).map_err(err)?;
    let rho = density_from_ensemble(&[(1.0 - p_e, target.clone()), (p_e, contaminant)]).map_err(err)?;
    let from_density = fidelity(&rho, &target).map_err(err)?;
    let closed = type1_fidelity_analytic(0.0, p_e).map_err(err)?;
    let analytic_ok = (from_density - (1.0 - p_e)).abs() < 1e-12 && (closed - (1.0 - p_e)).abs() < 1e-12;
    let f = heralded_fidelity(&Interference, &params, 100_000, 8).map_err(err)?;
    let z = (f.mean() - (1.0 - p_e)) / f.std_error();
    ensure(
        analytic_ok && z.abs() < 3.0,
        format!(
            "density {from_density:.15}, closed form {closed:.15}, MC {:.5} +- {:.1e} ({z:+.2} SE)",
            f.mean(),
            f.std_error()
        ),
    )
}

fn criterion_8() -> Check {
    let target = Coincidence.target_state();
    let mut worst = 0.0f64;
    for k in 0..=6 {
        let params = ProtocolParams {
            sigma_x: 1e-9 * 10f64.powi(k),
            delta_k: 1.0e7,
            ..link(0.01, 0.5, 0.5)
        };
        let mut rng = substream(9, k as u64);
        for _ in 0..100 {
            let h = Coincidence.sample_herald(&params, &mut rng).map_err(err)?;
            worst = worst.max(1.0 - fidelity(&h.state, &target).map_err(err)?);
        }
        worst = worst.max(1.0 - Coincidence.analytic_fidelity(&params).map_err(err)?);
    }
    ensure(worst <= 1e-12, format!("sigma_x 1e-9..1e-3 m, max 1-F = {worst:.3e}"))
}

fn criterion_9() -> Check {
    let grid = |k: usize| 10f64.powf(-4.0 + 4.0 * k as f64 / 19.0);
    let (mut checked, mut ties, mut mismatches) = (0, 0, 0);
    for a in 0..20 {
        for b in 0..20 {
            let (p_e, pc_eta) = (grid(a), grid(b));
            let gap = p_e - pc_eta / 4.0;
            if gap.abs() <= 1e-12 {
                ties += 1;
                continue;
            }
            let params = link(p_e, pc_eta, 1.0);
            let t = |p: f64| analytic::expected_entangle_time(p, params.t_c);
            let t1 = t(analytic::success_prob_type1(&params).map_err(err)?).map_err(err)?;
            let t2 = t(analytic::success_prob_type2(&params).map_err(err)?).map_err(err)?;
            checked += 1;
            if (t2 - t1).signum() != gap.signum() {
                mismatches += 1;
            }
        }
    }
    ensure(
        mismatches == 0,
        format!("{checked} points, {ties} ties skipped, {mismatches} mismatches"),
    )
}

fn criterion_10() -> Check {
    let p = ProtocolParams::cd111();
    let t1 = analytic::expected_entangle_time(analytic::success_prob_type1(&p).map_err(err)?, p.t_c)
        .map_err(err)?;
    let t2 = analytic::expected_entangle_time(analytic::success_prob_type2(&p).map_err(err)?, p.t_c)
        .map_err(err)?;
    let ratio = t2 / t1;
    let td = analytic::detection_time(3e-9, 1e-3, 1.0, 3).map_err(err)?;
    ensure(
        (ratio - 40.0).abs() < 1e-9 && (td - 9e-6).abs() < 1e-15,
        format!("T_II/T_I = {ratio}, T_d = {td:e} s"),
    )
}

fn criterion_11() -> Check {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [1u32, 2, 4, 8] {
        let mut config = RepeaterConfig::new(n, 1.0, 1.0, 1e-4, 1e-5);
        config.trials = 10_000;
        config.seed = 11;
        let r = simulate_chain(&config).map_err(err)?;
        let expect = f64::from(n) * std::f64::consts::E * 0.1;
        let direct = f64::from(n).exp() * 0.1;
        let rel = r.mean_time / expect - 1.0;
        let direct_rel = (r.direct_time / direct - 1.0).abs();
        ok &= rel.abs() < 0.03 && direct_rel < 1e-9 && r.final_fidelity >= 1.0 - 1e-12;
        parts.push(format!("n={n} {:+.2}%", 100.0 * rel));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(ok && secs < 60.0, format!("{}, {secs:.2} s", parts.join(", ")))
}

fn cli_csv(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut log = Vec::new();
    let code = ionnet_cli::run(
        std::iter::once("ionnet").chain(args.iter().copied()),
        &mut out,
        &mut log,
    );
    if code != 0 {
        return Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&log)));
    }
    Ok(out)
}

fn criterion_12() -> Check {
    let commands: [&[&str]; 4] = [
        &["verify-gate", "--random", "10", "--spectator", "3", "--seed", "7"],
        &["entangle", "--protocol", "type1", "--pe", "0.2", "--pc", "0.5", "--eta-d", "0.5", "--trials", "500", "--seed", "3"],
        &["repeater", "--n", "4", "--alpha-l0", "1", "--ps", "1e-2", "--tc", "1e-5", "--trials", "500", "--seed", "3"],
        &["sweep", "--target", "entangle", "--axis", "pe", "--start", "0.05", "--stop", "0.5", "--points", "3", "--trials", "200", "--seed", "5"],
    ];
    let mut same = 0;
    for args in commands {
        if cli_csv(args)? == cli_csv(args)? {
            same += 1;
        }
    }
    ensure(same == commands.len(), format!("{same}/{} commands byte-identical", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("remote CNOT identity", criterion_1),
        ("uniform branch law", criterion_2),
        ("type I success probability", criterion_3),
        ("type II success probability", criterion_4),
        ("geometric repetition", criterion_5),
        ("type I dephasing fidelity", criterion_6),
        ("type I inherent infidelity", criterion_7),
        ("type II position-noise invariance", criterion_8),
        ("crossover law", criterion_9),
        ("cd111 magnitudes", criterion_10),
        ("repeater scaling", criterion_11),
        ("reproducibility", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
