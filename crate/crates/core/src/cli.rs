//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 for runtime
//! failures (including lemma violations found by `verify-lemmas`).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytics::{self, FixedSchedule};
use crate::env::{Coupling, InitMode, Instance};
use crate::error::{Error, Result};
use crate::harness::{self, ExperimentConfig, SETTING_IDS};
use crate::policies::PolicyKind;

pub const THREADS_ENV: &str = "AOI_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "aoi-lab", version, about = "Age-of-information bandit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its regret curves and manifest.
    Run(RunArgs),
    /// Tabulate regret at the horizon across settings.
    Table(TableArgs),
    /// Evaluate the regret bounds for an instance.
    Bounds(BoundsArgs),
    /// Check the schedule-exchange inequalities on random schedules.
    VerifyLemmas(VerifyArgs),
    /// Print exact expected ages for a fixed schedule.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in setting id (1.a..1.e, 2.a..2.e).
    #[arg(long, conflicts_with = "config")]
    pub setting: Option<String>,
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Overrides {
    #[arg(long = "T")]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated policy names.
    #[arg(long)]
    pub policies: Option<String>,
    #[arg(long)]
    pub thr: Option<f64>,
    /// coupled | independent
    #[arg(long)]
    pub coupling: Option<String>,
    /// geometric | unit
    #[arg(long)]
    pub init: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Record every slot instead of ~200 log-spaced ones.
    #[arg(long)]
    pub all_slots: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated setting ids; defaults to all ten.
    #[arg(long)]
    pub setting: Option<String>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long = "T")]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    /// Expected number of sub-optimal pulls, for the count-based bound.
    #[arg(long)]
    pub counts: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "max-T", default_value_t = 8)]
    pub max_t: usize,
    #[arg(long = "max-K", default_value_t = 4)]
    pub max_k: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated 1-based channel indices for slots 1..T.
    #[arg(long)]
    pub schedule: String,
    /// 1-based channel used before slot 1; defaults to the best channel.
    #[arg(long)]
    pub pre: Option<usize>,
}

fn load_source(source: &SourceArgs) -> Result<ExperimentConfig> {
    match (&source.setting, &source.config) {
        (Some(id), None) => harness::builtin_setting(id),
        (None, Some(path)) => ExperimentConfig::load(path),
        _ => Err(Error::InvalidConfig("exactly one of --setting or --config is required".into())),
    }
}

fn apply_overrides(mut config: ExperimentConfig, o: &Overrides) -> Result<ExperimentConfig> {
    if let Some(t) = o.horizon {
        config.horizon = t;
    }
    if let Some(r) = o.reps {
        config.replications = r;
    }
    if let Some(s) = o.seed {
        config.seed = s;
    }
    if let Some(p) = &o.policies {
        config.policies = PolicyKind::parse_list(p)?;
    }
    if let Some(thr) = o.thr {
        config.thr = thr;
    }
    if let Some(c) = &o.coupling {
        config.coupling = c.parse::<Coupling>()?;
    }
    if let Some(i) = &o.init {
        config.init = i.parse::<InitMode>()?;
    }
    config.validate()?;
    Ok(config)
}

/// Rayon pool honouring `AOI_LAB_THREADS` when set.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={v} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::ThreadPool(e.to_string()))
}

fn cmd_run(args: &RunArgs, stderr: &mut dyn Write) -> Result<()> {
    let mut config = apply_overrides(load_source(&args.source)?, &args.overrides)?;
    config.record_all_slots = args.all_slots;
    let result = thread_pool()?.install(|| harness::run_experiment(&config))?;
    let files = harness::write_outputs(&result, &args.out, args.force)?;
    writeln!(stderr, "wrote {} and {}", files.csv.display(), files.manifest.display())?;
    Ok(())
}

fn cmd_table(args: &TableArgs, stdout: &mut dyn Write) -> Result<()> {
    let ids: Vec<String> = match &args.setting {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => SETTING_IDS.iter().map(|s| s.to_string()).collect(),
    };
    let configs = ids
        .iter()
        .map(|id| apply_overrides(harness::builtin_setting(id)?, &args.overrides))
        .collect::<Result<Vec<_>>>()?;
    let policies = configs[0].policies.clone();
    let table = thread_pool()?.install(|| harness::final_regret_table(&configs, &policies))?;
    match &args.out {
        Some(path) => {
            if path.exists() && !args.force {
                return Err(Error::WouldOverwrite(path.display().to_string()));
            }
            table.write_csv(std::fs::File::create(path)?)
        }
        None => table.write_csv(stdout),
    }
}

fn cmd_bounds(args: &BoundsArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = load_source(&args.source)?;
    let mut params = config.bounds;
    if let Some(a) = args.alpha {
        params.alpha = a;
    }
    if let Some(c) = args.c {
        params.c = c;
    }
    if let Some(t0) = args.t0 {
        params.t0 = t0;
    }
    let horizon = args.horizon.unwrap_or(config.horizon) as u64;
    let report = analytics::eval_bounds(&config.instance, horizon, params, args.counts)?;
    serde_json::to_writer_pretty(&mut *stdout, &report)?;
    writeln!(stdout)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    if args.max_t < 1 || args.max_k < 1 {
        return Err(Error::InvalidConfig("--max-T and --max-K must be at least 1".into()));
    }
    let report = analytics::verify_lemmas(args.max_t, args.max_k, args.trials, args.seed)?;
    serde_json::to_writer_pretty(&mut *stdout, &report)?;
    writeln!(stdout)?;
    writeln!(stderr, "{} trials, {} violations", report.trials, report.violations())?;
    Ok(report.violations() == 0)
}

fn parse_channel(s: &str, instance: &Instance) -> Result<usize> {
    let k: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("`{s}` is not a channel index")))?;
    if k == 0 || k > instance.k() {
        return Err(Error::InvalidChannel { channel: k, k: instance.k() });
    }
    Ok(k - 1)
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = load_source(&args.source)?;
    let instance = &config.instance;
    let channels = args
        .schedule
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_channel(s, instance))
        .collect::<Result<Vec<_>>>()?;
    let pre = match args.pre {
        Some(p) => parse_channel(&p.to_string(), instance)?,
        None => instance.k_star(),
    };
    let schedule = FixedSchedule::with_pre_history(channels, pre);
    writeln!(stdout, "t,channel,expected_aoi")?;
    for t in 1..=schedule.len() {
        let e = analytics::exact_expected_aoi(instance, &schedule, t)?;
        writeln!(stdout, "{t},{},{e}", schedule.channels[t - 1] + 1)?;
    }
    writeln!(stdout, "total,,{}", analytics::exact_cumulative_aoi(instance, &schedule)?)?;
    Ok(())
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => cmd_run(a, stderr).map(|_| true),
        Command::Table(a) => cmd_table(a, stdout).map(|_| true),
        Command::Bounds(a) => cmd_bounds(a, stdout).map(|_| true),
        Command::VerifyLemmas(a) => cmd_verify(a, stdout, stderr),
        Command::Oracle(a) => cmd_oracle(a, stdout).map(|_| true),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() { 1 } else { 2 }
        }
    }
}
