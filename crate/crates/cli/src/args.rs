use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Simulate heralded ion-photon entanglement, the remote CNOT gadget and
/// repeater chains.
///
/// Units: seconds, radians, km and 1/km. Results go to stdout as CSV (or to
/// --output); progress goes to stderr. Every flag can also be set in a flat
/// `key = value` file passed with --config; flags on the command line win.
#[derive(Debug, Clone, Parser)]
#[command(name = "ionnet", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the remote-CNOT identity on basis, Haar-random and spectator-entangled inputs.
    VerifyGate(VerifyArgs),
    /// Run a heralded entangling protocol until success, many times.
    Entangle(EntangleArgs),
    /// Simulate a sequential repeater chain.
    Repeater(RepeaterArgs),
    /// Repeat `entangle` or `repeater` along one parameter axis.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file with defaults for any flag.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed; trial t uses substream t of this seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write CSV here instead of stdout. Relative paths resolve against
    /// $IONNET_OUTPUT_DIR when it is set.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    /// Single-photon interference.
    #[default]
    Type1,
    /// Two-photon coincidence.
    Type2,
}

impl ProtocolName {
    pub fn key(self) -> &'static str {
        match self {
            ProtocolName::Type1 => "type1",
            ProtocolName::Type2 => "type2",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProtocolArgs {
    /// Entangling protocol.
    #[arg(long, value_enum, default_value_t = ProtocolName::Type1)]
    pub protocol: ProtocolName,
    /// Parameter preset to start from (cd111, ideal).
    #[arg(long, default_value = "cd111")]
    pub preset: String,
    /// Excitation probability per pump pulse.
    #[arg(long)]
    pub pe: Option<f64>,
    /// Collection half-angle (rad); sets the efficiency to 3(1 - cos θ)/4.
    #[arg(long, conflicts_with = "pc")]
    pub theta: Option<f64>,
    /// Collection efficiency.
    #[arg(long)]
    pub pc: Option<f64>,
    /// Detector efficiency.
    #[arg(long = "eta-d")]
    pub eta_d: Option<f64>,
    /// Collection enhancement factor (cavity, fiber), ≥ 1.
    #[arg(long)]
    pub enhancement: Option<f64>,
    /// Time per attempt (s).
    #[arg(long)]
    pub tc: Option<f64>,
    /// Excited-state lifetime (s).
    #[arg(long)]
    pub te: Option<f64>,
    /// Pump/collection wave-vector difference (rad/m).
    #[arg(long = "delta-k")]
    pub delta_k: Option<f64>,
    /// RMS ion position spread (m).
    #[arg(long = "sigma-x")]
    pub sigma_x: Option<f64>,
    /// RMS interferometer phase (rad), overriding √2·Δk·σx.
    #[arg(long = "sigma-phi")]
    pub sigma_phi: Option<f64>,
    /// Polarizing beam splitters with four detectors (type2).
    #[arg(long)]
    pub pbs: bool,
    /// Photons required for quantum-jump readout.
    #[arg(long = "k-photons")]
    pub k_photons: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Number of Haar-random two-qubit logic states.
    #[arg(long, default_value_t = 100)]
    pub random: u32,
    /// Number of random logic states entangled with one spectator qubit.
    #[arg(long, default_value_t = 20)]
    pub spectator: u32,
    /// Largest acceptable 1 − F on any branch.
    #[arg(long, default_value_t = 1e-12)]
    pub threshold: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrialArgs {
    /// Independent trials.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Attempt cap per entangle trial.
    #[arg(long = "max-attempts", default_value_t = 1_000_000_000)]
    pub max_attempts: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EntangleArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChainArgs {
    /// Number of segments.
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Segment length (km).
    #[arg(long, default_value_t = 1.0)]
    pub l0: f64,
    /// Attenuation coefficient (1/km).
    #[arg(long, conflicts_with = "alpha_l0")]
    pub alpha: Option<f64>,
    /// Attenuation per segment α·L0; sets α = value / L0.
    #[arg(long = "alpha-l0")]
    pub alpha_l0: Option<f64>,
    /// Link heralding probability, instead of deriving it from the protocol.
    #[arg(long)]
    pub ps: Option<f64>,
    /// Fidelity multiplier per swap.
    #[arg(long = "swap-fidelity", default_value_t = 1.0)]
    pub swap_fidelity: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RepeaterArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepTarget {
    Entangle,
    Repeater,
}

/// Parameters a sweep can vary; names match the flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Pe,
    Theta,
    Pc,
    EtaD,
    Enhancement,
    Tc,
    Te,
    DeltaK,
    SigmaX,
    SigmaPhi,
    KPhotons,
    N,
    L0,
    Alpha,
    AlphaL0,
    Ps,
    SwapFidelity,
}

impl Axis {
    pub fn key(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }

    pub fn is_integer(self) -> bool {
        matches!(self, Axis::KPhotons | Axis::N)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Command to repeat.
    #[arg(long, value_enum)]
    pub target: SweepTarget,
    /// Parameter to vary.
    #[arg(long, value_enum)]
    pub axis: Axis,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    /// Number of points, endpoints included.
    #[arg(long, default_value_t = 5)]
    pub points: u32,
    /// Space points logarithmically.
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}
