//! `qcontrol`: reproduction cases and file-driven simulation of controlled
//! channels.

mod cases;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cases::{CaseOptions, CASES};
use commands::{DistinguishArgs, InfoArgs, SimulateArgs, ValidateArgs};
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "qcontrol", version, about = "Coherent control of quantum channel implementations")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Override the pass tolerance of every case run.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Number of random trials for randomized cases.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run registered reproduction cases.
    Reproduce(ReproduceArgs),
    /// Output of coherent control, classical control or the switch.
    Simulate(SimulateArgs),
    /// Check whether a transformation matrix is admissible for a channel.
    ValidateT(ValidateArgs),
    /// Holevo quantity or coherent information through a controlled map.
    Info(InfoArgs),
    /// Output distance between two candidate implementations.
    Distinguish(DistinguishArgs),
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// Case id, or `all`.
    #[arg(long, required_unless_present = "list")]
    case: Option<String>,
    /// List registered cases.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Run independent trials on the rayon pool.
    #[arg(long)]
    parallel: bool,
    /// Include runtime_ms in JSON and CSV output.
    #[arg(long)]
    timing: bool,
}

fn reproduce(cli: &Cli, args: &ReproduceArgs) -> error::Result<(String, bool)> {
    if args.list {
        let width = CASES.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let text = CASES
            .iter()
            .map(|c| format!("{:width$}  {}\n", c.id, c.summary))
            .collect();
        return Ok((text, true));
    }
    let opts = CaseOptions {
        d: args.d,
        p: args.p,
        trials: cli.trials,
        seed: cli.seed,
        tol: cli.tol,
        parallel: args.parallel,
    };
    let id = args.case.as_deref().expect("clap enforces --case or --list");
    let selected: Vec<_> = if id == "all" {
        CASES.iter().collect()
    } else {
        vec![cases::find(id)?]
    };
    let reports = selected
        .into_iter()
        .map(|c| cases::run_case(c, &opts))
        .collect::<error::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let timing = args.timing || cli.format == Format::Pretty;
    Ok((report::render(&reports, cli.format, timing)?, passed))
}

fn run(cli: &Cli) -> error::Result<(String, bool)> {
    let value = match &cli.command {
        Command::Reproduce(args) => return reproduce(cli, args),
        Command::Simulate(args) => commands::simulate(args)?,
        Command::ValidateT(args) => commands::validate_t(args)?,
        Command::Info(args) => commands::info(args)?,
        Command::Distinguish(args) => commands::distinguish(args)?,
    };
    Ok((commands::render(&value, cli.format)?, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
