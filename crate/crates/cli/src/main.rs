use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mquant_cli::{run, CliError, Command, MRange, MethodChoice, RunConfig, Source};
use mquant_core::{Base, FamilyKind};

#[derive(Parser)]
#[command(
    name = "mquant",
    version,
    about = "Optimal M-type approximations of discrete distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quantize a target and write a JSON report
    Quantize(Single),
    /// Quantize over a range of M and write CSV
    Sweep(Range),
    /// Evaluate every error bound for both methods
    Bounds(Single),
    /// Compare the algorithms with exhaustive search
    Oracle(Single),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Vd,
    Id,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Bits,
    Nats,
}

#[derive(Args)]
struct Common {
    /// File with one probability per line
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "family",
        required_unless_present = "family"
    )]
    input: Option<PathBuf>,
    /// Named family, e.g. yule-simon:0.2, geometric:0.5, uniform:4, adversarial
    #[arg(long, value_name = "NAME:PARAM")]
    family: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Logarithm base for divergences
    #[arg(long, value_enum, default_value_t = BaseArg::Bits)]
    base: BaseArg,
    /// Rescale input values to sum to one
    #[arg(long)]
    normalize: bool,
    /// Write here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Single {
    #[command(flatten)]
    common: Common,
    /// Precision: every probability becomes a multiple of 1/M
    #[arg(long = "M", value_name = "INT")]
    m: u64,
}

#[derive(Args)]
struct Range {
    #[command(flatten)]
    common: Common,
    #[arg(long = "M", value_name = "INT", conflicts_with_all = ["m_start", "m_end"], required_unless_present = "m_start")]
    m: Option<u64>,
    #[arg(long = "M-start", value_name = "INT", requires = "m_end")]
    m_start: Option<u64>,
    #[arg(long = "M-end", value_name = "INT", requires = "m_start")]
    m_end: Option<u64>,
    #[arg(long = "M-step", value_name = "INT", default_value_t = 1)]
    m_step: u64,
}

fn config(command: Command, common: Common, m: MRange) -> Result<RunConfig, CliError> {
    let source = match (common.input, common.family) {
        (Some(path), _) => Source::File(path),
        (None, Some(name)) => Source::Family(name.parse::<FamilyKind>()?),
        (None, None) => {
            return Err(CliError::Config(
                "one of --input or --family is required".into(),
            ))
        }
    };
    Ok(RunConfig {
        command,
        source,
        m,
        method: match common.method {
            MethodArg::Vd => MethodChoice::Vd,
            MethodArg::Id => MethodChoice::Id,
            MethodArg::Both => MethodChoice::Both,
        },
        base: match common.base {
            BaseArg::Bits => Base::Bits,
            BaseArg::Nats => Base::Nats,
        },
        normalize: common.normalize,
        output: common.output,
    })
}

fn build(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        Cmd::Quantize(s) => config(Command::Quantize, s.common, MRange::single(s.m)),
        Cmd::Bounds(s) => config(Command::Bounds, s.common, MRange::single(s.m)),
        Cmd::Oracle(s) => config(Command::Oracle, s.common, MRange::single(s.m)),
        Cmd::Sweep(r) => {
            let m = match (r.m, r.m_start, r.m_end) {
                (Some(m), _, _) => MRange::single(m),
                (None, Some(start), Some(end)) => MRange {
                    start,
                    end,
                    step: r.m_step,
                },
                _ => {
                    return Err(CliError::Config(
                        "give --M or both --M-start and --M-end".into(),
                    ))
                }
            };
            config(Command::Sweep, r.common, m)
        }
    }
}

fn execute(cli: Cli) -> Result<Vec<String>, CliError> {
    let config = build(cli)?;
    let outcome = run(&config)?;
    match &config.output {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome.violations)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in &violations {
                eprintln!("error: {v}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
