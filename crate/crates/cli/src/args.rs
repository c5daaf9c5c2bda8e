//! Command-line grammar.

use crate::sweep::Scale;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nonasym::Sign;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "nonasym",
    version,
    about = "Coulomb scattering observables at a finite observer distance",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output encoding
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout (only after a successful run)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps [default: available cores]
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Spacing for sweeps that do not name one
    #[arg(long, global = true, default_value = "linear", value_name = "linear|log")]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Differential cross-section sigma1(theta) next to Rutherford
    DiffXs(DiffXsArgs),
    /// Total cross-section and scattered-to-incident flux ratio
    TotalXs(TotalXsArgs),
    /// Transport cross-section
    TransportXs(TransportXsArgs),
    /// Universal functions I+-(xi) and the r-independent transport parts
    Universal(UniversalArgs),
    /// Flux balance integrals, or the forward amplitude with --forward
    OpticalCheck(OpticalCheckArgs),
    /// Ionized-impurity mobility of a semiconductor sample
    Mobility(MobilityArgs),
    /// Point evaluation of the special functions
    #[command(hide = true)]
    SpecfunEval(SpecfunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InteractionArgs {
    /// Sommerfeld parameter
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    /// attract or repel
    #[arg(long, default_value_t = Sign::Attract)]
    pub sign: Sign,
    /// Wavenumber (sets the length unit of r and the cross-sections)
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub k: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    /// Observer distance
    #[arg(long, allow_negative_numbers = true, conflicts_with = "kr")]
    pub r: Option<f64>,
    /// Observer distance times k
    #[arg(long, allow_negative_numbers = true)]
    pub kr: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DiffXsArgs {
    #[command(flatten)]
    pub interaction: InteractionArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Scattering angle
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// start:stop:points[:scale] over theta
    #[arg(long, value_name = "SPEC")]
    pub theta_sweep: Option<String>,
    /// Angle in units of the kinematic angle sqrt(2/kr)
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// start:stop:points[:scale] over x
    #[arg(long, value_name = "SPEC")]
    pub x_sweep: Option<String>,
    /// Read and print theta in degrees
    #[arg(long)]
    pub degrees: bool,
    /// U evaluation regime: auto, series, integral or asymptotic
    #[arg(long, default_value = "auto")]
    pub regime: String,
    /// name:start:stop:points[:scale] over theta, x, xi, kr or r
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TotalXsArgs {
    #[command(flatten)]
    pub interaction: InteractionArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Also integrate sigma1 over [0, pi] at the given r
    #[arg(long)]
    pub finite: bool,
    /// name:start:stop:points[:scale] over xi, kr or r
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TransportXsArgs {
    #[command(flatten)]
    pub interaction: InteractionArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// direct, regularized or auto
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// name:start:stop:points[:scale] over xi, kr or r
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct UniversalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    /// start:stop:points[:scale] over xi
    #[arg(long, value_name = "SPEC")]
    pub xi_sweep: Option<String>,
    /// name:start:stop:points[:scale] over xi
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmplitudeMethod {
    Contour,
    Acceleration,
    Abel,
}

#[derive(Debug, Clone, Args)]
pub struct OpticalCheckArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    /// attract, or repel together with --experimental-repel
    #[arg(long, default_value_t = Sign::Attract)]
    pub sign: Sign,
    /// Allow the repulsive flux balance, which has no closed-form backing
    #[arg(long)]
    pub experimental_repel: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub kr: Option<f64>,
    /// start:stop:points[:scale] over kr
    #[arg(long, value_name = "SPEC")]
    pub kr_sweep: Option<String>,
    /// Report the forward amplitude A instead of the flux balance
    #[arg(long)]
    pub forward: bool,
    /// Oscillatory integration for --forward
    #[arg(long, value_enum, default_value_t = AmplitudeMethod::Contour)]
    pub method: AmplitudeMethod,
    /// Relative tolerance for --forward
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-11)]
    pub rel_tol: f64,
    /// name:start:stop:points[:scale] over xi or kr
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Integral,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluationArg {
    Table,
    Direct,
}

#[derive(Debug, Clone, Args)]
pub struct MobilityArgs {
    /// Sample file, JSON or key = value
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Temperature, K
    #[arg(long = "T", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Net carrier concentration, cm^-3
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Compensation ratio n2/n1
    #[arg(long = "K", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Static dielectric constant
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Effective mass over the free electron mass
    #[arg(long, allow_negative_numbers = true)]
    pub m_eff_ratio: Option<f64>,
    /// Majority ion charge
    #[arg(long = "Z1")]
    pub z1: Option<u32>,
    /// Minority ion charge
    #[arg(long = "Z2")]
    pub z2: Option<u32>,
    /// Energy integral or its closed-form thermal estimate
    #[arg(long, value_enum, default_value_t = ModelArg::Integral)]
    pub model: ModelArg,
    /// Interpolation table or direct quadrature for the transport factors
    #[arg(long, value_enum, default_value_t = EvaluationArg::Table)]
    pub evaluation: EvaluationArg,
    /// Exchange the attractive/repulsive roles of the two ion species
    #[arg(long)]
    pub swap_signs: bool,
    /// Nodes of the interpolation table
    #[arg(long, default_value_t = 121)]
    pub table_nodes: usize,
    /// Relative tolerance of the energy integral
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-8)]
    pub rel_tol: f64,
    /// name:start:stop:points[:scale] over T, n, K, eps or m_eff_ratio
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecFunction {
    Gamma,
    Digamma,
    KummerM,
    TricomiU,
    UShifted,
    #[value(name = "u1-u2")]
    U1U2,
    G1,
    G2,
}

#[derive(Debug, Clone, Args)]
pub struct SpecfunArgs {
    #[arg(long, value_enum)]
    pub function: SpecFunction,
    /// Complex argument "re" or "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// First parameter "re" or "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second parameter "re" or "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    #[arg(long, default_value_t = Sign::Attract)]
    pub sign: Sign,
    /// U evaluation regime: auto, series, integral or asymptotic
    #[arg(long, default_value = "auto")]
    pub regime: String,
    /// z:start:stop:points[:scale], the real part of z
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}
