use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ldes_boundary::report::{self, EmitMode, Overrides, RunContext};
use ldes_boundary::Error;

#[derive(Parser)]
#[command(name = "ldes-boundary", version, about = "Boundary cost of long-duration energy storage")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, env = "LDES_CONFIG")]
    config: Option<PathBuf>,
    /// Directory for result files.
    #[arg(long, global = true, env = "LDES_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
    /// LP backend name.
    #[arg(long, global = true, env = "LDES_SOLVER")]
    solver: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Parallel sweep workers; 0 uses all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Feasibility and optimality tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-cost expansion without LDES; reports q*.
    Baseline,
    /// Boundary cost at one LDES capacity.
    Opportunity {
        #[arg(long)]
        ldes_power_mw: f64,
    },
    /// Boundary-cost curve over a list of LDES capacities.
    Sweep {
        /// Comma-separated capacities in MW; defaults to the config list.
        #[arg(long, value_delimiter = ',', conflicts_with = "capacities_file")]
        capacities: Option<Vec<f64>>,
        /// File with capacities in MW, separated by commas or whitespace.
        #[arg(long)]
        capacities_file: Option<PathBuf>,
    },
    /// Write the model as fixed MPS plus the constraint registry.
    EmitModel {
        #[arg(long, value_enum, default_value = "baseline")]
        mode: Mode,
        #[arg(long)]
        ldes_power_mw: Option<f64>,
    },
    /// Check a solution file against a model.
    Check {
        #[arg(long)]
        solution: PathBuf,
        /// MPS model; without it the baseline model is rebuilt from --config.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Baseline,
    Opportunity,
}

fn read_capacities(path: &Path) -> Result<Vec<f64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Usage(format!("{}: `{s}` is not a number", path.display())))
        })
        .collect()
}

fn run(cli: Cli) -> Result<report::CommandReport, Error> {
    let overrides = Overrides {
        solver: cli.solver,
        seed: cli.seed,
        workers: cli.workers,
        tol: cli.tol,
    };
    let name = match &cli.command {
        Command::Baseline => "baseline",
        Command::Opportunity { .. } => "opportunity",
        Command::Sweep { .. } => "sweep",
        Command::EmitModel { .. } => "emit-model",
        Command::Check { .. } => "check",
    };
    let ctx = RunContext::new(name, cli.config.as_deref(), &cli.out_dir, &overrides)?;
    match cli.command {
        Command::Baseline => report::cmd_baseline(ctx),
        Command::Opportunity { ldes_power_mw } => report::cmd_opportunity(ctx, ldes_power_mw),
        Command::Sweep {
            capacities,
            capacities_file,
        } => {
            let caps = match capacities_file {
                Some(p) => Some(read_capacities(&p)?),
                None => capacities,
            };
            report::cmd_sweep(ctx, caps)
        }
        Command::EmitModel { mode, ldes_power_mw } => {
            let mode = match mode {
                Mode::Baseline => EmitMode::Baseline,
                Mode::Opportunity => EmitMode::Opportunity,
            };
            report::cmd_emit_model(ctx, mode, ldes_power_mw)
        }
        Command::Check { solution, model } => report::cmd_check(ctx, &solution, model.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(r) => {
            for line in &r.summary {
                println!("{line}");
            }
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
