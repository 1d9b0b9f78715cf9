use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distributions::QuadSpec;
use crate::montecarlo::DEFAULT_CHUNK_SIZE;

#[derive(Debug, Parser)]
#[command(
    name = "ggsum",
    version,
    about = "Sums of Gamma-Gamma variates and the diversity receivers built on them",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single GG law: density, CDF, raw moment
    #[command(subcommand)]
    Dist(DistCmd),
    /// Sum approximations and their diagnostics
    #[command(subcommand)]
    Sum(SumCmd),
    /// MRC receiver metrics
    #[command(subcommand)]
    Rf(RfCmd),
    /// MIMO optical-wireless metrics
    #[command(subcommand)]
    Ow(OwCmd),
    /// Monte-Carlo estimates of the rf/ow metrics
    #[command(subcommand)]
    Mc(SystemCmd),
    /// Analytic and Monte-Carlo curves side by side, with the dB gap
    #[command(subcommand)]
    Compare(SystemCmd),
    /// Canned configurations of the reference figures
    Repro(ReproArgs),
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    Pdf(DistArgs),
    Cdf(DistArgs),
    Moment(DistArgs),
}

#[derive(Debug, Subcommand)]
pub enum SumCmd {
    /// Single-GG approximation of an i.i.d. sum
    ApproxIid(IidArgs),
    /// Signed GG mixture for a non-identical sum
    ApproxInid(InidArgs),
    /// Exact raw moments of the sum
    Moments(MomentsArgs),
    /// Approximation-error mean and variance, closed form and sampled
    ErrorStats(ErrorStatsArgs),
}

#[derive(Debug, Subcommand)]
pub enum RfCmd {
    Ber(RfArgs),
    Outage(RfArgs),
}

#[derive(Debug, Subcommand)]
pub enum OwCmd {
    Ber(OwArgs),
    Outage(OwArgs),
}

#[derive(Debug, Subcommand)]
pub enum SystemCmd {
    RfBer(RfArgs),
    RfOutage(RfArgs),
    OwBer(OwArgs),
    OwOutage(OwArgs),
}

/// Options every leaf command accepts.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// File of `key = value` lines; command-line flags take precedence
    #[arg(long)]
    pub config: Option<String>,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long, default_value_t = QuadSpec::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = QuadSpec::default().abs_tol)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = QuadSpec::default().max_refinements)]
    pub max_refinements: usize,
    #[arg(long, default_value_t = QuadSpec::default().tail_mass_tol)]
    pub tail_mass_tol: f64,
}

impl Common {
    pub fn quad(&self) -> QuadSpec {
        QuadSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_refinements: self.max_refinements,
            tail_mass_tol: self.tail_mass_tol,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Sample count; scientific notation such as 1e7 is accepted
    #[arg(long, default_value = "1e6")]
    pub samples: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Evaluation point (pdf, cdf)
    #[arg(long)]
    pub x: Option<f64>,
    /// Moment order
    #[arg(long)]
    pub n: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct IidArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Also report the moment-matching adjustment
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub solve: bool,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Relative)]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Args)]
pub struct InidArgs {
    #[arg(long)]
    pub k: f64,
    /// Integer shapes, comma separated
    #[arg(long, value_delimiter = ',')]
    pub m_list: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub omega_list: Vec<f64>,
    /// Read the integer shapes as the first shape and k as the common second one
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub swap: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    /// Number of identical variates (with --m); omit when --m-list is given
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, value_delimiter = ',')]
    pub m_list: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub omega_list: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    pub nu_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorStatsArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModArg {
    Bpsk,
    Dbpsk,
}

#[derive(Debug, Clone, Args)]
pub struct RfArgs {
    #[arg(long = "mod", value_enum, default_value_t = ModArg::Bpsk)]
    pub modulation: ModArg,
    /// Branch count; defaults to the length of --m-list
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: f64,
    /// Common shape of identical branches
    #[arg(long)]
    pub m: Option<f64>,
    /// Integer shape per branch (non-identical branches)
    #[arg(long, value_delimiter = ',')]
    pub m_list: Vec<u32>,
    /// Mean SNR of the first branch in dB
    #[arg(long, alias = "gbar-db", default_value_t = 0.0)]
    pub gbar1_db: f64,
    /// Exponential decay of the branch SNRs
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Explicit per-branch mean SNRs in dB (overrides --delta)
    #[arg(long, value_delimiter = ',')]
    pub gbar_list_db: Vec<f64>,
    /// Normalized outage threshold γ_th/γ̄₁ in dB, when no sweep is given
    #[arg(long, default_value_t = 0.0)]
    pub threshold_db: f64,
    /// start:stop:step in dB
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// BER/outage level for the dB gap (compare only)
    #[arg(long, default_value_t = 1e-4)]
    pub target_level: f64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct OwArgs {
    #[arg(long = "M", default_value_t = 1)]
    pub m_tx: usize,
    #[arg(long = "N", default_value_t = 1)]
    pub n_rx: usize,
    /// Turbulence shape of identical links
    #[arg(long)]
    pub a: Option<f64>,
    /// Mean irradiance of identical links
    #[arg(long, default_value_t = 1.0)]
    pub io: f64,
    /// Integer turbulence shape per link (non-identical links)
    #[arg(long, value_delimiter = ',')]
    pub a_list: Vec<u32>,
    /// Mean irradiance per link; defaults to a geometric profile
    #[arg(long, value_delimiter = ',')]
    pub omega_list: Vec<f64>,
    /// Ratio of the default geometric irradiance profile
    #[arg(long, default_value_t = 0.7)]
    pub omega_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    /// Reference SNR μ in dB; replaces eta and n0 by η = 1, N_o = 1/μ
    #[arg(long)]
    pub mu_db: Option<f64>,
    /// Normalized outage threshold h_th/μ in dB, when no sweep is given
    #[arg(long, default_value_t = 0.0)]
    pub threshold_db: f64,
    /// start:stop:step in dB
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    #[arg(long, default_value_t = 1e-4)]
    pub target_level: f64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub common: Common,
}
