//! Command-line arguments. Every argument struct also (de)serializes, so a
//! run's parameters can be stored in its manifest and replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rfpm_core::gla::{AnnealSchedule, GlaMethod, Optimizer};
use rfpm_core::potts::{BoundaryCondition, Expectation, GroundStateMethod};
use rfpm_core::scaling::{AxisMap, CorrelationSearch};
use rfpm_core::{FieldConvention, Variant, WeightMode};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "rfpm", version, about = "Random-field Potts model experiments")]
pub struct Cli {
    /// Worker threads; falls back to RFPM_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Sample a Gaussian field realization to a field file.
    FieldGen(FieldGenArgs),
    /// Exact greedy lattice animal by enumeration.
    GlaExact(GlaExactArgs),
    /// Greedy or annealed greedy lattice animal.
    GlaHeur(GlaHeurArgs),
    /// Per-sample GLA scores over box sizes and seeds.
    GlaScan(GlaScanArgs),
    /// Empirical GLA tail probabilities above the median.
    Tail(TailArgs),
    /// Polygon growth construction.
    Polygon(PolygonArgs),
    /// Exact Gibbs distribution by enumeration.
    GibbsExact(GibbsExactArgs),
    /// Heat-bath Monte Carlo.
    Mc(McArgs),
    /// Zero-temperature configuration.
    GroundState(GroundStateArgs),
    /// Disorder-averaged spontaneous magnetization.
    Magnetization(MagnetizationArgs),
    /// Correlation length for one epsilon.
    Corrlen(CorrlenArgs),
    /// Mean GLA growth against box size, with a power fit.
    Thm2(Thm2Args),
    /// Correlation length against epsilon, with a power fit.
    Thm1(Thm1Args),
    /// Fit a power law to a series CSV (`x,y,yerr`).
    Fit(FitArgs),
    /// Replay a run from its manifest.
    Rerun(RerunArgs),
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct FieldGenArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    /// Sum over all colors.
    All,
    /// Best single color.
    Best,
}

impl From<ModeArg> for WeightMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => WeightMode::AllColors,
            ModeArg::Best => WeightMode::BestColor,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GlaExactArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeArg,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

/// Optimizer selection shared by the GLA commands.
#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct OptimizerArgs {
    #[arg(long, default_value = "anneal")]
    pub method: GlaMethod,
    /// Largest animal enumerated by `exact`.
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    /// Maximum additions for `greedy` (unbounded by default).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = AnnealSchedule::default().t0)]
    pub t0: f64,
    #[arg(long, default_value_t = AnnealSchedule::default().t_end)]
    pub t_end: f64,
    #[arg(long, default_value_t = AnnealSchedule::default().sweeps)]
    pub sweeps: u32,
    #[arg(long, default_value_t = AnnealSchedule::default().restarts)]
    pub restarts: u32,
}

impl OptimizerArgs {
    pub fn optimizer(&self) -> Optimizer {
        match self.method {
            GlaMethod::Exact => Optimizer::Exact {
                max_size: self.max_size,
            },
            GlaMethod::Greedy => Optimizer::Greedy {
                steps: self.steps.unwrap_or(usize::MAX),
            },
            GlaMethod::Anneal => Optimizer::Anneal {
                schedule: AnnealSchedule {
                    t0: self.t0,
                    t_end: self.t_end,
                    sweeps: self.sweeps,
                    restarts: self.restarts,
                },
            },
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GlaHeurArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, default_value = "anneal")]
    pub method: GlaMethod,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = AnnealSchedule::default().t0)]
    pub t0: f64,
    #[arg(long, default_value_t = AnnealSchedule::default().t_end)]
    pub t_end: f64,
    #[arg(long, default_value_t = AnnealSchedule::default().sweeps)]
    pub sweeps: u32,
    #[arg(long, default_value_t = AnnealSchedule::default().restarts)]
    pub restarts: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeArg,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GlaScanArgs {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct TailArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub u: Vec<f64>,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct PolygonArgs {
    #[arg(long)]
    pub field: PathBuf,
    /// Triangle height parameter; defaults to the field file's epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long, default_value = "deterministic")]
    pub variant: Variant,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

fn parse_beta(s: &str) -> Result<f64, String> {
    let b: f64 = s.parse().map_err(|_| format!("bad inverse temperature `{s}`"))?;
    if b > 0.0 {
        Ok(b)
    } else {
        Err(format!("inverse temperature must be positive, got {s}"))
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GibbsExactArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, value_parser = parse_beta)]
    pub beta: f64,
    #[arg(long, default_value = "free")]
    pub bc: BoundaryCondition,
    /// Field coupling; defaults to the field file's epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct McArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, value_parser = parse_beta)]
    pub beta: f64,
    #[arg(long, default_value = "free")]
    pub bc: BoundaryCondition,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: u32,
    #[arg(long, default_value_t = 10000)]
    pub sweeps: u32,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GsKind {
    Exhaustive,
    Icm,
    Expansion,
    Anneal,
}

/// Ground-state method and annealing schedule.
#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GsArgs {
    #[arg(long, value_enum, default_value = "anneal")]
    pub gs_method: GsKind,
    #[arg(long, default_value_t = 200)]
    pub gs_sweeps: u32,
    #[arg(long, default_value_t = 0.2)]
    pub beta_start: f64,
    #[arg(long, default_value_t = 8.0)]
    pub beta_end: f64,
}

impl GsArgs {
    pub fn method(&self) -> GroundStateMethod {
        match self.gs_method {
            GsKind::Exhaustive => GroundStateMethod::Exhaustive,
            GsKind::Icm => GroundStateMethod::Icm,
            GsKind::Expansion => GroundStateMethod::Expansion,
            GsKind::Anneal => GroundStateMethod::Anneal {
                sweeps: self.gs_sweeps,
                beta_start: self.beta_start,
                beta_end: self.beta_end,
            },
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GroundStateArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, default_value = "free")]
    pub bc: BoundaryCondition,
    #[arg(long)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub gs: GsArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalKind {
    Exact,
    HeatBath,
    GroundState,
}

/// How thermal averages are computed per realization.
#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ThermalArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub method: ThermalKind,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: u32,
    #[arg(long, default_value_t = 10000)]
    pub sweeps: u32,
    #[command(flatten)]
    pub gs: GsArgs,
}

impl ThermalArgs {
    pub fn expectation(&self) -> Expectation {
        match self.method {
            ThermalKind::Exact => Expectation::Exact,
            ThermalKind::HeatBath => Expectation::HeatBath {
                burn_in: self.burn_in,
                sweeps: self.sweeps,
            },
            ThermalKind::GroundState => Expectation::GroundState { method: self.gs.method() },
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct MagnetizationArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_parser = parse_beta)]
    #[serde(with = "rfpm_core::stats::extended_f64")]
    pub beta: f64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub wired_color: u8,
    #[command(flatten)]
    pub thermal: ThermalArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

/// Box sizes explored by the correlation-length search.
#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct SearchArgs {
    /// Smallest half-side; at least 2 keeps `ln ln L` defined.
    #[arg(long, default_value_t = 2)]
    pub n_start: u32,
    #[arg(long, default_value_t = 32)]
    pub n_max: u32,
    /// Scan every half-side instead of doubling and bisecting.
    #[arg(long)]
    pub linear: bool,
}

impl SearchArgs {
    pub fn search(&self) -> CorrelationSearch {
        CorrelationSearch {
            n_start: self.n_start,
            n_max: self.n_max,
            doubling: !self.linear,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CorrlenArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, value_parser = parse_beta, default_value = "inf")]
    #[serde(with = "rfpm_core::stats::extended_f64")]
    pub beta: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long, default_value_t = 0)]
    pub wired_color: u8,
    #[command(flatten)]
    pub thermal: ThermalArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Thm2Args {
    /// JSON experiment config with the same fields as these flags; when
    /// given, the other flags are ignored.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long = "N", value_delimiter = ',', required_unless_present = "config")]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Thm1Args {
    /// JSON experiment config with the same fields as these flags; when
    /// given, the other flags are ignored.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, value_parser = parse_beta, default_value = "inf")]
    #[serde(with = "rfpm_core::stats::extended_f64")]
    pub beta: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "unit")]
    pub conv: FieldConvention,
    #[arg(long, default_value_t = 0)]
    pub wired_color: u8,
    #[command(flatten)]
    pub thermal: ThermalArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct FitArgs {
    /// CSV with header `x,y,yerr`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "log")]
    pub x_map: AxisMap,
    #[arg(long, default_value = "log")]
    pub y_map: AxisMap,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output path for the replayed run.
    #[arg(long)]
    pub out: PathBuf,
}
