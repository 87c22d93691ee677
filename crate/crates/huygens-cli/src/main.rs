//! huygens-channel: timelike channel capacity between comoving detectors
//! in expanding FRW cosmologies.
//!
//! Subcommands: `capacity` (one configuration), `sweep` (plot-ready CSV),
//! `timing` (earliest timelike contact and scale factors), `verify`
//! (self-check suite).
//!
//! Exit codes: 0 ok, 1 verification failure, 2 configuration error, 3
//! numerical failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use huygens_cli::config::{OutputFormat, RunConfig};
use huygens_cli::output;
use huygens_cli::run::{self, threads_from_env, EvalError};

#[derive(Parser)]
#[command(name = "huygens-channel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured pair once and print a JSON record.
    Capacity(CommonArgs),
    /// Sweep one variable and emit a row per grid point.
    Sweep(CommonArgs),
    /// Signal-timing data: earliest strictly timelike receiver switch-on
    /// (comoving and proper separation), maximal separation, scale factors.
    Timing(CommonArgs),
    /// Run the oracle self-checks and report pass/fail per check.
    Verify {
        /// Skip the slow mode-equation reconstruction check.
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (flat `key = value` lines); defaults apply when
    /// omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write output here instead of the path from the config (or stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for `sweep`: csv (default) or json.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Config(m) => Failure::config(m),
            EvalError::Numerical(m) => Failure::numerical(m),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Capacity(args) => {
            let config = load_config(args.config.as_deref())?;
            if matches!(args.format, Some(FormatArg::Csv)) {
                return Err(Failure::config("`capacity` emits a JSON record; use `sweep` for CSV"));
            }
            let eval = run::evaluate(&config)?;
            write_output(args.out.as_deref(), config.output_path.as_deref(), &output::evaluation_json(&eval))?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let config = load_config(args.config.as_deref())?;
            let rows = run::run_sweep(&config, threads_from_env())?;
            let rendered = match effective_format(&args, &config) {
                OutputFormat::Csv => output::sweep_csv(&rows),
                OutputFormat::Json => output::sweep_json(&rows),
            };
            write_output(args.out.as_deref(), config.output_path.as_deref(), &rendered)?;
            Ok(0)
        }
        Command::Timing(args) => {
            let config = load_config(args.config.as_deref())?;
            if matches!(args.format, Some(FormatArg::Csv)) {
                return Err(Failure::config("`timing` emits a JSON record; use `sweep` for CSV"));
            }
            let record = output::timing_record(&config)?;
            write_output(args.out.as_deref(), config.output_path.as_deref(), &output::timing_json(&record))?;
            Ok(0)
        }
        Command::Verify { fast } => {
            let reports = huygens_core::run_verification(&huygens_core::VerifyOptions {
                fast,
                closed_form_perturbation: None,
            });
            let mut all_passed = true;
            for report in &reports {
                let status = if report.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {}", report.name, report.detail);
                all_passed &= report.passed;
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::parse(&text).map_err(|e| Failure::config(format!("{}: {e}", p.display())))
        }
    }
}

fn effective_format(args: &CommonArgs, config: &RunConfig) -> OutputFormat {
    match args.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => config.output_format,
    }
}

fn write_output(cli_out: Option<&Path>, config_out: Option<&str>, content: &str) -> Result<(), Failure> {
    let target: Option<PathBuf> = cli_out
        .map(Path::to_path_buf)
        .or_else(|| config_out.map(PathBuf::from));
    match target {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
    }
}
