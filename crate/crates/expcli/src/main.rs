//! Experiment runner for the secrecy-outage analysis: reproduces the
//! figure datasets, answers point outage queries, solves the scaling
//! law, and runs the validation suites.

mod config;
mod experiments;
mod table;
mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wiretap_evt::mc::{Conditioning, ConditioningImpl};
use wiretap_evt::outage::{ConstantsMode, OutageQuery, SystemShape};

use experiments::GridSpec;
use table::CurveTable;

#[derive(Parser)]
#[command(
    name = "expcli",
    version,
    about = "Secrecy-outage experiments for a multi-user MISO downlink with eavesdroppers"
)]
struct Cli {
    /// JSON config file supplying default flag values (explicit flags win)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical outage CDFs (plain and above-threshold) vs the analytic
    /// CDF and the lemma bounds, one block per antenna count
    Fig1(Fig1Args),
    /// Closed-form corollary bounds vs the lemma bounds over alpha
    Fig2(Fig2Args),
    /// Bounds vs the eavesdropper count at fixed alpha, with the
    /// critical count flagged
    Fig3(Fig3Args),
    /// Point evaluation of the outage probability and all bounds
    Outage(OutageArgs),
    /// Required user count for a target scaling factor
    Scaling(ScalingArgs),
    /// Run property validation suites and emit a JSON report
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CondImplArg {
    Rejection,
    Pot,
}

impl From<CondImplArg> for ConditioningImpl {
    fn from(v: CondImplArg) -> Self {
        match v {
            CondImplArg::Rejection => ConditioningImpl::Rejection,
            CondImplArg::Pot => ConditioningImpl::PotModel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstantsArg {
    /// Closed-form location/scale constants (slow to converge for 2t > 2)
    Asymptotic,
    /// Finite-n constants from the exact chi-square tail quantile
    ExactTail,
}

impl From<ConstantsArg> for ConstantsMode {
    fn from(v: ConstantsArg) -> Self {
        match v {
            ConstantsArg::Asymptotic => ConstantsMode::Asymptotic,
            ConstantsArg::ExactTail => ConstantsMode::ExactTail,
        }
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; stdout if omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = 4.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 200)]
    alpha_steps: usize,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        GridSpec { min: self.alpha_min, max: self.alpha_max, steps: self.alpha_steps }
    }
}

#[derive(Args)]
struct Fig1Args {
    /// Number of users K
    #[arg(short = 'K', long, default_value_t = 30)]
    users: u64,
    /// Number of eavesdroppers M
    #[arg(short = 'M', long, default_value_t = 30)]
    eves: u64,
    /// Antenna counts t (comma list)
    #[arg(long = "t", value_delimiter = ',', default_value = "2,4,8")]
    t: Vec<u32>,
    /// Transmit power budget P
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Monte Carlo trials per curve
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Master seed (env EXPCLI_SEED overrides the built-in default)
    #[arg(long, env = "EXPCLI_SEED", default_value_t = 42)]
    seed: u64,
    /// Series truncation length
    #[arg(long, default_value_t = 100)]
    terms: usize,
    /// How the above-threshold curves are sampled
    #[arg(long, value_enum, default_value_t = CondImplArg::Rejection)]
    conditioning_impl: CondImplArg,
    /// Normalizing constants for the analytic curves
    #[arg(long, value_enum, default_value_t = ConstantsArg::ExactTail)]
    constants: ConstantsArg,
    /// DKW band miss probability
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Fig2Args {
    #[arg(short = 'K', long, default_value_t = 1000)]
    users: u64,
    #[arg(short = 'M', long, default_value_t = 1000)]
    eves: u64,
    /// Antenna count t
    #[arg(long = "t", default_value_t = 4)]
    t: u32,
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Fig3Args {
    #[arg(short = 'K', long, default_value_t = 1000)]
    users: u64,
    /// Eavesdropper count or sweep lo:hi[:step]
    #[arg(short = 'M', long, default_value = "10:1000")]
    eves: String,
    #[arg(long = "t", default_value_t = 4)]
    t: u32,
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// SNR-ratio threshold alpha = 2^{rate}
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutageArgs {
    #[arg(short = 'K', long, default_value_t = 30)]
    users: u64,
    #[arg(short = 'M', long, default_value_t = 30)]
    eves: u64,
    #[arg(long = "t", default_value_t = 4)]
    t: u32,
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// Threshold alpha; mutually exclusive with --rate
    #[arg(long, conflicts_with = "rate")]
    alpha: Option<f64>,
    /// Secrecy rate in bits (alpha = 2^rate)
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 100)]
    terms: usize,
    #[arg(long, value_enum, default_value_t = ConstantsArg::Asymptotic)]
    constants: ConstantsArg,
    /// Monte Carlo trials for an empirical estimate; 0 disables it
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, env = "EXPCLI_SEED", default_value_t = 42)]
    seed: u64,
    /// Conditioning of the empirical estimate
    #[arg(long, value_enum, default_value_t = CondArg::None)]
    conditioning: CondArg,
    #[arg(long, value_enum, default_value_t = CondImplArg::Rejection)]
    conditioning_impl: CondImplArg,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CondArg {
    None,
    Eve,
    User,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(short = 'M', long, default_value_t = 100)]
    eves: u64,
    #[arg(long = "t", default_value_t = 4)]
    t: u32,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Target value of the scaling factor
    #[arg(long, default_value_t = 1.0)]
    target_lambda: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Which suite to run
    #[arg(value_enum, default_value_t = validate::Suite::All)]
    suite: validate::Suite,
    #[arg(long, env = "EXPCLI_SEED", default_value_t = 42)]
    seed: u64,
    /// Trial budget of the Monte Carlo checks
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match config::args_with_config() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Fig1(a) => {
            let table = experiments::fig1_table(
                a.users,
                a.eves,
                &a.t,
                a.power,
                a.grid.spec(),
                a.trials,
                a.seed,
                a.terms,
                a.conditioning_impl.into(),
                a.constants.into(),
                a.delta,
            )?;
            write_table(&table, &a.output)?;
        }
        Command::Fig2(a) => {
            let table = experiments::fig2_table(a.users, a.eves, a.t, a.power, a.grid.spec())?;
            write_table(&table, &a.output)?;
        }
        Command::Fig3(a) => {
            let range = experiments::parse_m_range(&a.eves)?;
            let table = experiments::fig3_table(a.users, a.t, a.power, a.alpha, range)?;
            write_table(&table, &a.output)?;
        }
        Command::Outage(a) => {
            let query = match (a.alpha, a.rate) {
                (Some(alpha), None) => OutageQuery::from_alpha(alpha)?,
                (None, Some(rate)) => OutageQuery::from_rate_bits(rate)?,
                (None, None) => OutageQuery::from_alpha(2.0)?,
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            let shape = SystemShape::new(a.users, a.eves, a.t, a.power)?;
            let conditioning = match a.conditioning {
                CondArg::None => Conditioning::None,
                CondArg::Eve => Conditioning::eve_above_default(&shape)?,
                CondArg::User => Conditioning::user_above_default(&shape)?,
            };
            let table = experiments::outage_table(
                shape,
                query.alpha,
                a.terms,
                a.constants.into(),
                a.trials,
                a.seed,
                conditioning,
                a.conditioning_impl.into(),
                a.delta,
            )?;
            write_table(&table, &a.output)?;
        }
        Command::Scaling(a) => {
            let report = experiments::scaling_report(a.eves, a.t, a.alpha, a.target_lambda)?;
            let mut w = open_output(&a.out)?;
            match a.format {
                Format::Csv => report.table.write_csv(&mut w)?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report.json)?)?,
            }
        }
        Command::Validate(a) => {
            let checks = validate::run_suite(a.suite, a.seed, a.trials)?;
            let suite_name = format!("{:?}", a.suite).to_lowercase();
            let report = validate::report_json(&suite_name, a.seed, a.trials, &checks);
            let mut w = open_output(&a.out)?;
            writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
            if checks.iter().any(|c| !c.pass) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn open_output(path: &Option<PathBuf>) -> std::io::Result<Box<dyn Write>> {
    match path {
        Some(p) => Ok(Box::new(std::io::BufWriter::new(std::fs::File::create(p)?))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn write_table(table: &CurveTable, output: &OutputArgs) -> std::io::Result<()> {
    let mut w = open_output(&output.out)?;
    match output.format {
        Format::Csv => table.write_csv(&mut w),
        Format::Json => table.write_json(&mut w),
    }
}
