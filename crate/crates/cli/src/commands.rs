use std::io::Write;

use ionnet_core::gadget::verify_identity_branches;
use ionnet_core::protocols::{
    analytic, expected_entangle_time, run_batch, Collection, ProtocolParams,
    ProtocolRegistry,
};
use ionnet_core::quantum::{make_basis_state, PureState};
use ionnet_core::repeater::{simulate_chain, RepeaterConfig};
use ionnet_core::rng::substream;

use crate::args::{
    Axis, ChainArgs, EntangleArgs, ProtocolArgs, RepeaterArgs, SweepArgs, SweepTarget, TrialArgs,
    VerifyArgs,
};
use crate::table::{ResultRow, Table};
use crate::CliError;

const DEFAULT_ENTANGLE_TRIALS: u64 = 1_000;
const DEFAULT_REPEATER_TRIALS: u64 = 10_000;

/// Applies flag overrides on top of the chosen preset and validates for the
/// selected protocol.
pub fn resolve_params(args: &ProtocolArgs) -> Result<(ProtocolParams, &'static str), CliError> {
    let mut p = ProtocolParams::preset(&args.preset)?;
    if let Some(v) = args.pe {
        p.p_e = v;
    }
    if let Some(v) = args.theta {
        p.collection = Collection::HalfAngle(v);
    }
    if let Some(v) = args.pc {
        p.collection = Collection::Efficiency(v);
    }
    if let Some(v) = args.eta_d {
        p.eta_d = v;
    }
    if let Some(v) = args.enhancement {
        p.enhancement = v;
    }
    if let Some(v) = args.tc {
        p.t_c = v;
    }
    if let Some(v) = args.te {
        p.t_e = v;
    }
    if let Some(v) = args.delta_k {
        p.delta_k = v;
    }
    if let Some(v) = args.sigma_x {
        p.sigma_x = v;
    }
    if let Some(v) = args.sigma_phi {
        p.sigma_phi_override = Some(v);
    }
    if let Some(v) = args.k_photons {
        p.k_photons = v;
    }
    p.pbs_variant = args.pbs;
    let name = args.protocol.key();
    let protocol = ProtocolRegistry::with_builtin().get(name)?;
    protocol.validate(&p)?;
    Ok((p, name))
}

fn time_or_inf(p: f64, t_c: f64) -> f64 {
    expected_entangle_time(p, t_c).unwrap_or(f64::INFINITY)
}

/// Closed-form columns shared by `entangle` rows.
fn analytic_columns(p: &ProtocolParams) -> Result<ResultRow, CliError> {
    let p_c = p.collection_efficiency()?;
    let p1 = analytic::success_prob_type1(p)?;
    let p2 = analytic::success_prob_type2(p)?;
    Ok(ResultRow::new()
        .with("p_e", p.p_e)
        .with("p_c", p_c)
        .with("eta_d", p.eta_d)
        .with("pbs", p.pbs_variant)
        .with("t_c", p.t_c)
        .with("sigma_phi", p.sigma_phi())
        .with("p_type1", p1)
        .with("p_type2", p2)
        .with("t_type1", time_or_inf(p1, p.t_c))
        .with("t_type2", time_or_inf(p2, p.t_c))
        .with(
            "detection_time",
            analytic::detection_time(p.t_e, p_c, p.eta_d, p.k_photons)?,
        ))
}

pub fn entangle(args: &EntangleArgs, log: &mut dyn Write) -> Result<Table, CliError> {
    Table::from_rows(vec![entangle_row(args, log)?])
}

fn entangle_row(args: &EntangleArgs, log: &mut dyn Write) -> Result<ResultRow, CliError> {
    let (params, name) = resolve_params(&args.protocol)?;
    let protocol = ProtocolRegistry::with_builtin().get(name)?;
    let trials = args.trials.trials.unwrap_or(DEFAULT_ENTANGLE_TRIALS);
    let seed = args.common.seed;
    let _ = writeln!(log, "entangle: {name}, {trials} trials, seed {seed}");
    let summary = run_batch(
        protocol.as_ref(),
        &params,
        trials,
        seed,
        args.trials.max_attempts,
    )?;
    let p = protocol.success_probability(&params)?;
    let t = expected_entangle_time(p, params.t_c)?;
    Ok(ResultRow::new()
        .with("protocol", name)
        .with("seed", seed)
        .with("trials", trials)
        .with("max_attempts", args.trials.max_attempts)
        .then(analytic_columns(&params)?)
        .with("p_analytic", p)
        .with("p_empirical", summary.success_rate())
        .with("p_stderr", summary.success_rate_std_error())
        .with("attempts_analytic", 1.0 / p)
        .with("attempts_mean", summary.attempts.mean())
        .with("attempts_stderr", summary.attempts.std_error())
        .with("time_analytic", t)
        .with("time_mean", summary.elapsed.mean())
        .with("time_stderr", summary.elapsed.std_error())
        .with("fidelity_analytic", protocol.analytic_fidelity(&params)?)
        .with("fidelity_mean", summary.fidelity.mean())
        .with("fidelity_stderr", summary.fidelity.std_error())
        .with("successes", summary.successes)
        .with("capped", summary.capped)
        .with("flagged", summary.flagged))
}

fn chain_config(
    chain: &ChainArgs,
    protocol: &ProtocolArgs,
    trials: &TrialArgs,
    seed: u64,
) -> Result<RepeaterConfig, CliError> {
    let (params, name) = resolve_params(protocol)?;
    let p_s = match chain.ps {
        Some(p) => p,
        None => ProtocolRegistry::with_builtin()
            .get(name)?
            .success_probability(&params)?,
    };
    let alpha = match (chain.alpha, chain.alpha_l0) {
        (Some(a), _) => a,
        (None, Some(al)) if chain.l0 > 0.0 => al / chain.l0,
        (None, Some(_)) => {
            return Err(CliError::Core(ionnet_core::Error::Validation {
                field: "l0",
                reason: "alpha-l0 needs a positive segment length".into(),
            }))
        }
        (None, None) => 1.0,
    };
    let mut config = RepeaterConfig::new(chain.n, chain.l0, alpha, p_s, params.t_c);
    config.trials = trials.trials.unwrap_or(DEFAULT_REPEATER_TRIALS);
    config.seed = seed;
    config.swap_fidelity = chain.swap_fidelity;
    config.validate()?;
    Ok(config)
}

pub fn repeater(args: &RepeaterArgs, log: &mut dyn Write) -> Result<Table, CliError> {
    Table::from_rows(vec![repeater_row(args, log)?])
}

fn repeater_row(args: &RepeaterArgs, log: &mut dyn Write) -> Result<ResultRow, CliError> {
    let config = chain_config(&args.chain, &args.protocol, &args.trials, args.common.seed)?;
    let _ = writeln!(
        log,
        "repeater: {} segments, {} trials, seed {}",
        config.n_segments, config.trials, config.seed
    );
    let r = simulate_chain(&config)?;
    let p_seg = config.segment_success_prob()?;
    let swaps = config.n_segments.saturating_sub(1) as i32;
    Ok(ResultRow::new()
        .with("seed", config.seed)
        .with("trials", config.trials)
        .with("n_segments", config.n_segments)
        .with("l0_km", config.l0_km)
        .with("alpha_per_km", config.alpha_per_km)
        .with("alpha_l0", config.alpha_per_km * config.l0_km)
        .with("p_s", config.p_s)
        .with("t_c", config.t_c)
        .with("channel_transmission", config.channel_transmission())
        .with("p_segment", p_seg)
        .with("time_analytic", r.analytic_time)
        .with("time_mean", r.mean_time)
        .with("time_stderr", r.time_std_error)
        .with("direct_time", r.direct_time)
        .with("direct_over_repeater", r.direct_time / r.analytic_time)
        .with("attempts_per_segment_analytic", 1.0 / p_seg)
        .with("attempts_per_segment_mean", r.mean_attempts_per_segment)
        .with("attempts_per_segment_stderr", r.attempts_std_error)
        .with("fidelity_analytic", config.swap_fidelity.powi(swaps))
        .with("fidelity_mean", r.final_fidelity)
        .with("fidelity_stderr", r.fidelity_std_error)
        .with("swaps_x0_z0", r.swap_outcomes[0])
        .with("swaps_x0_z1", r.swap_outcomes[1])
        .with("swaps_x1_z0", r.swap_outcomes[2])
        .with("swaps_x1_z1", r.swap_outcomes[3]))
}

/// Outcome of `verify-gate`: the table plus the worst deviation seen.
pub struct Verification {
    pub table: Table,
    pub max_deviation: f64,
    pub threshold: f64,
}

pub fn verify_gate(args: &VerifyArgs, log: &mut dyn Write) -> Result<Verification, CliError> {
    let seed = args.common.seed;
    let _ = writeln!(
        log,
        "verify-gate: 4 basis, {} random, {} spectator inputs, seed {seed}",
        args.random, args.spectator
    );
    let mut cases: Vec<(&str, Vec<PureState>)> = Vec::new();
    cases.push((
        "basis",
        (0..4).map(|k| make_basis_state(2, k)).collect::<Result<_, _>>()?,
    ));
    let mut rng = substream(seed, 0);
    cases.push((
        "haar",
        (0..args.random)
            .map(|_| PureState::random(2, &mut rng))
            .collect::<Result<_, _>>()?,
    ));
    let mut rng = substream(seed, 1);
    cases.push((
        "spectator",
        (0..args.spectator)
            .map(|_| PureState::random(3, &mut rng))
            .collect::<Result<_, _>>()?,
    ));

    let mut rows = Vec::new();
    let mut overall = (0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0u64);
    let row = |case: &str, stats: (f64, f64, f64, u64)| {
        ResultRow::new()
            .with("case", case)
            .with("inputs", stats.3)
            .with("branches", 4 * stats.3)
            .with("max_deviation", stats.0)
            .with("min_branch_probability", stats.1)
            .with("max_branch_probability", stats.2)
            .with("branch_probability_analytic", 0.25)
            .with("threshold", args.threshold)
            .with("pass", stats.0 <= args.threshold)
            .with("seed", seed)
    };
    for (case, states) in &cases {
        let mut stats = (0.0f64, f64::INFINITY, f64::NEG_INFINITY, states.len() as u64);
        for s in states {
            for b in verify_identity_branches(s)? {
                stats.0 = stats.0.max(b.deviation);
                stats.1 = stats.1.min(b.probability);
                stats.2 = stats.2.max(b.probability);
            }
        }
        overall = (
            overall.0.max(stats.0),
            overall.1.min(stats.1),
            overall.2.max(stats.2),
            overall.3 + stats.3,
        );
        rows.push(row(case, stats));
    }
    rows.push(row("all", overall));
    let verdict = if overall.0 <= args.threshold { "<=" } else { ">" };
    let _ = writeln!(
        log,
        "max deviation {:e} {verdict} {:e}",
        overall.0, args.threshold
    );
    Ok(Verification {
        table: Table::from_rows(rows)?,
        max_deviation: overall.0,
        threshold: args.threshold,
    })
}

/// Grid of `points` values from `start` to `stop`.
pub fn sweep_points(start: f64, stop: f64, points: u32, log: bool) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Usage("--points must be ≥ 1".into()));
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(CliError::Usage("--log needs positive --start and --stop".into()));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let steps = f64::from(points - 1);
    Ok((0..points)
        .map(|k| {
            let t = f64::from(k) / steps;
            if k == points - 1 {
                stop
            } else if log {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            }
        })
        .collect())
}

fn set_axis(axis: Axis, value: f64, protocol: &mut ProtocolArgs, chain: &mut ChainArgs) -> Result<(), CliError> {
    let as_int = |v: f64| -> Result<u32, CliError> {
        if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
            Err(CliError::Usage(format!("axis `{}` needs integer values, got {v}", axis.key())))
        } else {
            Ok(v as u32)
        }
    };
    match axis {
        Axis::Pe => protocol.pe = Some(value),
        Axis::Theta => {
            protocol.theta = Some(value);
            protocol.pc = None;
        }
        Axis::Pc => {
            protocol.pc = Some(value);
            protocol.theta = None;
        }
        Axis::EtaD => protocol.eta_d = Some(value),
        Axis::Enhancement => protocol.enhancement = Some(value),
        Axis::Tc => protocol.tc = Some(value),
        Axis::Te => protocol.te = Some(value),
        Axis::DeltaK => protocol.delta_k = Some(value),
        Axis::SigmaX => protocol.sigma_x = Some(value),
        Axis::SigmaPhi => protocol.sigma_phi = Some(value),
        Axis::KPhotons => protocol.k_photons = Some(as_int(value)?),
        Axis::N => chain.n = as_int(value)?,
        Axis::L0 => chain.l0 = value,
        Axis::Alpha => {
            chain.alpha = Some(value);
            chain.alpha_l0 = None;
        }
        Axis::AlphaL0 => {
            chain.alpha_l0 = Some(value);
            chain.alpha = None;
        }
        Axis::Ps => chain.ps = Some(value),
        Axis::SwapFidelity => chain.swap_fidelity = value,
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, log: &mut dyn Write) -> Result<Table, CliError> {
    let points = sweep_points(args.start, args.stop, args.points, args.log)?;
    let axis_key = args.axis.key();
    let mut rows = Vec::with_capacity(points.len());
    for value in points {
        let mut protocol = args.protocol.clone();
        let mut chain = args.chain.clone();
        set_axis(args.axis, value, &mut protocol, &mut chain)?;
        let row = match args.target {
            SweepTarget::Entangle => entangle_row(
                &EntangleArgs {
                    protocol,
                    trials: args.trials.clone(),
                    common: args.common.clone(),
                },
                log,
            )?,
            SweepTarget::Repeater => repeater_row(
                &RepeaterArgs {
                    chain,
                    protocol,
                    trials: args.trials.clone(),
                    common: args.common.clone(),
                },
                log,
            )?,
        };
        rows.push(
            ResultRow::new()
                .with("sweep_axis", axis_key.as_str())
                .with("sweep_value", value)
                .then(row),
        );
    }
    Table::from_rows(rows)
}
