//! Command-line surface.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wavedens::DensityModel;

use crate::config::ExperimentConfig;
use crate::experiments::DEFAULT_RATE_SIZES;
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "wavedens",
    version,
    about = "Wavelet density estimation with penalized level selection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo MISE study for one model.
    Run(ExperimentArgs),
    /// MISE table for the three benchmark models.
    Table1(ExperimentArgs),
    /// Mean reconstructions and ISE lists for the three benchmark models.
    Figures(ExperimentArgs),
    /// MISE against sample size and the log-log slope.
    Rates {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RATE_SIZES)]
        n_list: Vec<usize>,
    },
    /// Filter algebra, pyramid equivalence and energy checks.
    Selftest,
}

/// Flags override values from `--config`, which override the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// TOML file with any subset of the settings below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// m1 | m2 | m3 | mix:w,mu1,var1,mu2,var2 | beta:a,b
    #[arg(long)]
    pub model: Option<DensityModel>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub vanishing_moments: Option<usize>,
    #[arg(long)]
    pub level_cap: Option<u32>,
    #[arg(long)]
    pub cascade_depth: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub emit_grid: bool,
    /// Plotting only; risk figures always use the raw estimate.
    #[arg(long)]
    pub clip_renormalize: bool,
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig, UsageError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m;
        }
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = self.$field.clone() { cfg.$field = v; } )* };
        }
        take!(
            n,
            reps,
            lambda,
            vanishing_moments,
            level_cap,
            cascade_depth,
            seed,
            out
        );
        cfg.emit_grid |= self.emit_grid;
        cfg.clip_renormalize |= self.clip_renormalize;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `argv` (program name first) into a subcommand and its resolved configuration.
pub fn parse_config<I, T>(argv: I) -> Result<(Command, Option<ExperimentConfig>), ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ParseFailure::Clap)?;
    let cfg = match &cli.command {
        Command::Run(a)
        | Command::Table1(a)
        | Command::Figures(a)
        | Command::Rates { args: a, .. } => Some(a.resolve().map_err(ParseFailure::Usage)?),
        Command::Selftest => None,
    };
    Ok((cli.command, cfg))
}

#[derive(Debug)]
pub enum ParseFailure {
    Clap(clap::Error),
    Usage(UsageError),
}
