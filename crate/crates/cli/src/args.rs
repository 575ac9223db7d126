use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::interferer::InterfererSpec;
use crate::sweep::{Scale, SweepVar};

/// Hoyt (Nakagami-q) fading link metrics: capacity, secrecy and outage sweeps
/// as CSV, Rice Ie tables, Monte Carlo cross-checks and a self-test.
#[derive(Debug, Parser)]
#[command(name = "hoytlab", version, args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Write CSV (or the self-test report) to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Initial Gauss-Legendre node count; refinement doubles it up to
    /// max(4096, NODES)
    #[arg(long, global = true, default_value_t = 64)]
    pub nodes: usize,

    /// Relative tolerance between successive quadrature refinements
    #[arg(long, global = true, default_value = "1e-10")]
    pub rel_tol: f64,

    /// Monte Carlo seed
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Monte Carlo sample count
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: u64,

    /// key = value file with default flags; command-line flags override it
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodic capacity with optimum rate adaptation, its lower bound and the
    /// high-SNR asymptote
    Capacity(CapacityArgs),
    /// Secrecy outage probability and probability of positive secrecy capacity
    Secrecy(SecrecyArgs),
    /// Outage probability with co-channel interference, with or without noise
    Outage(OutageArgs),
    /// Rice Ie-function in every representation
    IeTable(IeTableArgs),
    /// Compare one analytic metric with its Monte Carlo estimate
    Mc(McArgs),
    /// Run the built-in consistency checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SweepArgs {
    /// Swept variable
    #[arg(long, value_enum)]
    pub sweep: Option<SweepVar>,

    /// First sweep value
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,

    /// Last sweep value
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,

    /// Number of sweep points
    #[arg(long)]
    pub points: Option<usize>,

    /// Point spacing
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
}

#[derive(Debug, Args)]
#[command(
    after_help = "Defaults: the SNR sweep spans -10..40 dB in 1 dB steps for the q family \
0, 0.1, 0.25, 0.5, 0.75, 0.9, 1 (capacity-vs-SNR curves with lower-bound markers and \
high-SNR asymptotes). '--sweep q' spans q = 0..1 in 101 points at each --snr-db value \
(capacity loss versus q)."
)]
pub struct CapacityArgs {
    /// Hoyt shape parameters, one curve each (SNR sweep)
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0,0.1,0.25,0.5,0.75,0.9,1")]
    pub q: Vec<f64>,

    /// Mean SNR values in dB, one curve each (q sweep)
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, allow_hyphen_values = true, default_value = "0,20,40")]
    pub snr_db: Vec<f64>,

    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum SecrecyFormArg {
    #[default]
    Single,
    Double,
}

#[derive(Debug, Args)]
#[command(
    after_help = "Defaults: Eve's mean SNR 15 dB and secrecy rate threshold 0.1 bit, \
q_b in {0.2, 0.8}, q_e in {0.1, 0.5, 1}, Bob's mean SNR swept over -10..40 dB in 1 dB steps \
(the reference secrecy scenario)."
)]
pub struct SecrecyArgs {
    /// Bob's Hoyt shape parameters
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.2,0.8")]
    pub q_b: Vec<f64>,

    /// Eve's Hoyt shape parameters
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.1,0.5,1")]
    pub q_e: Vec<f64>,

    /// Eve's mean SNR in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 15.0)]
    pub snr_e_db: f64,

    /// Secrecy rate threshold R_S in bits per channel use
    #[arg(long, default_value_t = 0.1)]
    pub rate_threshold: f64,

    /// Bob's mean SNR values in dB (rate-threshold sweep)
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, allow_hyphen_values = true, default_value = "5")]
    pub snr_b_db: Vec<f64>,

    /// Integral form used for the outage column
    #[arg(long, value_enum, default_value_t = SecrecyFormArg::Single)]
    pub form: SecrecyFormArg,

    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
#[command(
    after_help = "Defaults: INR 5 dB and outage threshold 0 dB, single interferers \
eta_mu (format 2, eta = 0.04, mu = 0.5 and 2) and kappa_mu (kappa = 2, mu = 0.5 and 2), \
q in {0.2, 0.5, 1}, average SINR swept over -10..40 dB in 1 dB steps (outage with \
interference and noise). '--sweep sir_db' drops the noise (interference-limited); \
'--sweep snr_db' drops the interference."
)]
pub struct OutageArgs {
    /// Desired-link Hoyt shape parameters
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.2,0.5,1")]
    pub q: Vec<f64>,

    /// Interferer, repeatable:
    /// kind=eta_mu,format=2,eta=..,mu=..[,inr_db=..] or kind=kappa_mu,kappa=..,mu=..[,inr_db=..]
    #[arg(long, action = ArgAction::Append, value_name = "SPEC")]
    pub interferer: Vec<InterfererSpec>,

    /// Sum all interferers into one curve instead of one curve per interferer
    #[arg(long)]
    pub aggregate: bool,

    /// INR in dB for interferers without their own inr_db
    #[arg(long, allow_negative_numbers = true, default_value_t = 5.0)]
    pub inr_db: f64,

    /// Outage threshold gamma_o in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub threshold_db: f64,

    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
pub struct IeTableArgs {
    /// k values, 0 <= k < 1
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.99")]
    pub k: Vec<f64>,

    /// x values, x >= 0
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.01,0.1,1,10,100")]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Metric: outage, capacity_ora, secrecy_outage, prob_positive_secrecy, op_interference
    #[arg(long, default_value = "outage")]
    pub metric: String,

    /// Hoyt shape of the (desired) link
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,

    /// Mean SNR of the (desired) link in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    pub snr_db: f64,

    /// Outage threshold gamma_o in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub threshold_db: f64,

    /// Bob's Hoyt shape
    #[arg(long, default_value_t = 0.5)]
    pub q_b: f64,

    /// Eve's Hoyt shape
    #[arg(long, default_value_t = 0.3)]
    pub q_e: f64,

    /// Bob's mean SNR in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    pub snr_b_db: f64,

    /// Eve's mean SNR in dB
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    pub snr_e_db: f64,

    /// Secrecy rate threshold in bits per channel use
    #[arg(long, default_value_t = 0.1)]
    pub rate_threshold: f64,

    /// Interferer for op_interference, repeatable (same syntax as `outage`);
    /// defaults to kind=eta_mu,format=2,eta=0.04,mu=0.5
    #[arg(long, action = ArgAction::Append, value_name = "SPEC")]
    pub interferer: Vec<InterfererSpec>,

    /// INR in dB for interferers without their own inr_db
    #[arg(long, allow_negative_numbers = true, default_value_t = 5.0)]
    pub inr_db: f64,

    /// Neglect the background noise in op_interference
    #[arg(long)]
    pub no_noise: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Level {
    /// Analytic cross-checks only
    #[default]
    Fast,
    /// Analytic checks plus Monte Carlo agreement for every metric
    Full,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    pub level: Level,

    #[arg(long, hide = true)]
    pub inject_failure: bool,
}
