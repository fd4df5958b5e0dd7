//! `flatband`: bound states, Green functions, and densities of states of
//! the one-dimensional spin-1 Dirac model with a flat band. Emits
//! deterministic CSV or JSON tables (see `schemas/` in the repository)
//! and runs the validation suite.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use flatband_cli::checks;
use flatband_cli::commands::{self, Sweep};
use flatband_cli::potential_spec::PotentialSpec;
use flatband_cli::table::Table;
use flatband_core::ModelParams;

#[derive(Parser)]
#[command(name = "flatband", version, about)]
struct Cli {
    /// Mass gap parameter m
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    m: f64,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PotentialArgs {
    /// Potential description file (JSON, see schemas/potential.schema.json)
    #[arg(long)]
    potential: Option<PathBuf>,
    /// Delta potential strength g
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Square well width (use with --v11/--v22/--v33)
    #[arg(long)]
    a: Option<f64>,
    /// Square well depth on the first component
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    v11: f64,
    /// Square well depth on the middle component
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    v22: f64,
    /// Square well depth on the third component
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    v33: f64,
}

impl PotentialArgs {
    fn resolve(&self) -> Result<PotentialSpec> {
        PotentialSpec::from_cli(
            self.potential.as_deref(),
            self.g,
            self.a,
            self.v11,
            self.v22,
            self.v33,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Band energies over a k-grid
    Dispersion {
        /// k-grid as lo:hi:steps
        #[arg(long, default_value = "-3:3:121", allow_hyphen_values = true)]
        sweep: String,
    },
    /// Continuum density of states over an energy grid
    Dos {
        /// Energy grid as lo:hi:steps
        #[arg(long, default_value = "-3:3:121", allow_hyphen_values = true)]
        sweep: String,
    },
    /// Free coordinate Green function along x at fixed energy
    Green {
        /// Energy (off the spectrum)
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
        /// Source point x'
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        /// x-grid as lo:hi:steps
        #[arg(long, default_value = "-5:5:201", allow_hyphen_values = true)]
        sweep: String,
    },
    /// Bound states of a potential, optionally swept over its strength
    Bound {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Strength sweep as lo:hi:steps (replaces every nonzero depth)
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        /// Deepest family index to resolve
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Root refinement tolerance
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Run the validation suite; nonzero exit on any failing check
    Validate {
        /// Check suite: all, closed-form, family, solver, oracle, green
        #[arg(long, default_value = "all")]
        suite: String,
        /// Emit the report as JSON instead of one line per check
        #[arg(long)]
        json: bool,
    },
}

fn write_table(table: &Table, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => table.write_csv(&mut sink),
        Format::Json => table.write_json(&mut sink),
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let params =
        ModelParams::new(cli.m).map_err(|e| anyhow::anyhow!("invalid model parameters: {e}"))?;
    let table = match &cli.command {
        Command::Dispersion { sweep } => commands::cmd_dispersion(params, Sweep::parse(sweep)?),
        Command::Dos { sweep } => commands::cmd_dos(params, Sweep::parse(sweep)?),
        Command::Green { energy, x0, sweep } => {
            commands::cmd_green(params, *energy, *x0, Sweep::parse(sweep)?)?
        }
        Command::Bound { potential, sweep, n_max, tol } => {
            let spec = potential.resolve()?;
            match sweep {
                Some(s) => {
                    commands::cmd_bound_sweep(params, &spec, Sweep::parse(s)?, *n_max, *tol)?
                }
                None => commands::cmd_bound(params, &spec, *n_max, *tol)?,
            }
        }
        Command::Validate { suite, json } => {
            let results = checks::run_suite(suite);
            if results.is_empty() {
                anyhow::bail!("unknown suite {suite:?}");
            }
            let ok = results.iter().all(|r| r.passed);
            let mut sink: Box<dyn Write> = match &cli.out {
                Some(path) => Box::new(File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            if *json || cli.format == Format::Json {
                let report = json!({
                    "suite": suite,
                    "passed": ok,
                    "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                });
                serde_json::to_writer_pretty(&mut sink, &report)?;
                writeln!(sink)?;
            } else {
                for r in &results {
                    writeln!(sink, "{}", r.summary_line())?;
                }
            }
            return Ok(ok);
        }
    };
    write_table(&table, cli.format, cli.out.as_ref())?;
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
