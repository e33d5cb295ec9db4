use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use freechoice_cli::commands::{
    cmd_audit, cmd_demo, cmd_derive_order, cmd_gtest, cmd_sample, CliError, CommandOutput,
};

/// Audit finite probability models for free choices under a causal order.
#[derive(Parser)]
#[command(name = "freechoice", version, about)]
struct Cli {
    /// Emit structured JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Exit with code 1 when any audited variable is not free
    #[arg(long, global = true)]
    fail_on_not_free: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit every variable of a scenario file
    Audit {
        /// Scenario file
        file: PathBuf,
        /// Also evaluate the past-only variant for comparison
        #[arg(long)]
        past_only: bool,
    },
    /// Derive the causal order from a scenario's spacetime block
    DeriveOrder {
        /// Scenario file with a spacetime block
        file: PathBuf,
    },
    /// Draw seeded samples from a scenario's distribution
    Sample {
        /// Scenario file with a dist block
        file: PathBuf,
        /// Number of rows to draw
        #[arg(long)]
        n: usize,
        /// Generator seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output sample file
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a G-test of independence on a sample file
    Gtest {
        /// Sample file produced by `sample`
        datafile: PathBuf,
        /// Left variable set, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        lhs: Vec<String>,
        /// Right variable set, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        rhs: Vec<String>,
        /// Significance level; repeatable (default 0.05 and 0.01)
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
    },
    /// Run a built-in demo: single, counterexample, prbox, singlet, lhv
    Demo {
        /// Demo name
        name: String,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Msg(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Audit { file, past_only } => cmd_audit(&read(file)?, *past_only, cli.json),
        Command::DeriveOrder { file } => cmd_derive_order(&read(file)?, cli.json),
        Command::Sample { file, n, seed, out } => {
            let (csv, summary) =
                cmd_sample(&read(file)?, *n, *seed, &out.display().to_string(), cli.json)?;
            fs::write(out, csv)
                .map_err(|e| CliError::Msg(format!("cannot write {}: {e}", out.display())))?;
            Ok(summary)
        }
        Command::Gtest {
            datafile,
            lhs,
            rhs,
            alphas,
        } => cmd_gtest(&read(datafile)?, lhs, rhs, alphas, cli.json),
        Command::Demo { name } => cmd_demo(name, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{}", output.text);
            if cli.fail_on_not_free && output.not_free_found {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
