//! Command line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "condlab",
    version,
    about = "Condensation experiments: selection-mutation waves, weighted permutations, fitness networks"
)]
pub struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Condensate share γ(β) = 1 - β ∫ q(dx)/(1-x).
    Gamma(GammaArgs),
    /// Tilted weights u_n, log W_n, mean fitness and the constant c.
    KingmanW(KingmanWArgs),
    /// Wave masses p_n(1 - x/n, 1] against γ(β) P(α, x).
    KingmanWave(KingmanWaveArgs),
    /// Moment representation against literal grid iteration.
    KingmanGridCheck(GridCheckArgs),
    /// Tail masses of the limit law.
    LimitMass(LimitMassArgs),
    /// Solves the renewal recursion for the model or for explicit sequences.
    RenewalSolve(RenewalArgs),
    /// Malthusian root for power cycle weights and the right-edge comparators.
    Malthus(MalthusArgs),
    /// Normalisation sequence h_n of weighted permutations.
    PermH(PermHArgs),
    /// Cycle counts of sampled weighted permutations.
    PermSample(PermSampleArgs),
    /// Left-edge wave of the cycle length distribution (γ > 0).
    PermWaveLeft(PermWaveLeftArgs),
    /// Right-edge mass near the full length (γ < 0).
    PermWaveRight(PermWaveRightArgs),
    /// Grows preferential attachment networks with fitness.
    NetSim(NetSimArgs),
    /// Phase, λ* and limit masses of the impact measure.
    NetPhase(NetPhaseArgs),
    /// Impact measure near fitness 1 on the ln n scale.
    NetWave(NetWaveArgs),
    /// Gamma shape fit of a wave profile.
    FitWave(FitWaveArgs),
    /// Re-runs a manifest and compares the outputs byte for byte.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gamma(_) => "gamma",
            Self::KingmanW(_) => "kingman-w",
            Self::KingmanWave(_) => "kingman-wave",
            Self::KingmanGridCheck(_) => "kingman-grid-check",
            Self::LimitMass(_) => "limit-mass",
            Self::RenewalSolve(_) => "renewal-solve",
            Self::Malthus(_) => "malthus",
            Self::PermH(_) => "perm-h",
            Self::PermSample(_) => "perm-sample",
            Self::PermWaveLeft(_) => "perm-wave-left",
            Self::PermWaveRight(_) => "perm-wave-right",
            Self::NetSim(_) => "net-sim",
            Self::NetPhase(_) => "net-phase",
            Self::NetWave(_) => "net-wave",
            Self::FitWave(_) => "fit-wave",
            Self::Verify(_) => "verify",
        }
    }

    pub fn output(&self) -> Option<&OutputArgs> {
        Some(match self {
            Self::Gamma(a) => &a.output,
            Self::KingmanW(a) => &a.output,
            Self::KingmanWave(a) => &a.output,
            Self::KingmanGridCheck(a) => &a.output,
            Self::LimitMass(a) => &a.output,
            Self::RenewalSolve(a) => &a.output,
            Self::Malthus(a) => &a.output,
            Self::PermH(a) => &a.output,
            Self::PermSample(a) => &a.output,
            Self::PermWaveLeft(a) => &a.output,
            Self::PermWaveRight(a) => &a.output,
            Self::NetSim(a) => &a.output,
            Self::NetPhase(a) => &a.output,
            Self::NetWave(a) => &a.output,
            Self::FitWave(a) => &a.output,
            Self::Verify(_) => return None,
        })
    }

    pub fn monte_carlo(&self) -> Option<&McArgs> {
        match self {
            Self::PermSample(a) => Some(&a.mc),
            Self::PermWaveLeft(a) => Some(&a.mc),
            Self::PermWaveRight(a) => Some(&a.mc),
            Self::NetSim(a) => Some(&a.mc),
            Self::NetWave(a) => Some(&a.mc),
            _ => None,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    /// Tail exponent of the mutant law q(1-h, 1] = h^α.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Mutation probability.
    #[arg(long, default_value_t = 0.25)]
    pub beta: f64,
    /// Initial fitness law, `point:A` or `polytail:A`.
    #[arg(long, default_value = "point:0.5")]
    pub p0: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Output file; the table goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// SVG rendering of the main columns.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct McArgs {
    /// Master seed; falls back to CONDLAB_SEED, then to a fixed default.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for replicas; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GammaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KingmanWArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Last generation.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Row stride.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KingmanWaveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0])]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridCheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Number of grid cells.
    #[arg(long, default_value_t = 100_000)]
    pub grid: usize,
    /// Interval widths h of (1-h, 1].
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1])]
    pub h: Vec<f64>,
    /// Largest accepted absolute difference.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LimitMassArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 0.5, 1.0])]
    pub h: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RenewalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Explicit kernel k_1, k_2, ... (with --forcing) instead of the model.
    #[arg(long, value_delimiter = ',', requires = "forcing")]
    pub kernel: Option<Vec<f64>>,
    /// Explicit forcing b_1, b_2, ...
    #[arg(long, value_delimiter = ',', requires = "kernel")]
    pub forcing: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MalthusArgs {
    /// Cycle weight exponent, θ_j = j^γ.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Cutoffs m of [1 - m/n, 1].
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 5, 10])]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PermHArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Compare against exhaustive enumeration of S_n (n ≤ 10).
    #[arg(long)]
    pub brute_check: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PermSampleArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PermWaveLeftArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PermWaveRightArgs {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 20_000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 5, 10])]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Znorm {
    Adaptive,
    DefaultDet,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NetSimArgs {
    /// Tail exponent of the fitness law.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Znorm::Adaptive)]
    pub znorm: Znorm,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NetPhaseArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub lambda: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NetWaveArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0])]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub replicas: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitWaveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// CSV with `x` and `mass` columns; otherwise the model wave at --n is fitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Fit grid; defaults to 0.25, 0.5, ..., 8.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// x at which the model wave's plateau mass is read off.
    #[arg(long, default_value_t = 50.0)]
    pub plateau_x: f64,
    /// Normalising mass; defaults to the model plateau or the last input row.
    #[arg(long)]
    pub plateau_mass: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
}
