//! Command-line front end: scenario validation, single-shot routing and
//! rating, parameter sweeps, and the exhaustive-search cross-check.
//!
//! Exit codes: 0 success, 1 parse/validation/usage failure, 2 no feasible
//! route.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beamroute_cli::format::{path_string, sig12};
use beamroute_cli::report::{compute_routes, hop_table_csv, render_text, ReportError, RouteMode};
use beamroute_cli::schema::{load_scenario, validate_scenario_text};
use beamroute_cli::sweep::{sweep_csv, SweepSpec, SweepVariable};
use beamroute_core::analysis::{
    f_au_closed, f_ba_closed, f_bu_closed, rate_bps_hz, snr_active_closed, snr_passive_closed,
};
use beamroute_core::channel::channel_matrix;
use beamroute_core::routing::{
    exhaustive_route_oracle, route_hybrid, route_passive_only, OracleMode, RoutingError,
};
use beamroute_core::scenario::Scenario;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamroute",
    version,
    about = "Plan multi-hop reflection routes across hybrid active/passive surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and report every violation.
    Validate { file: PathBuf },
    /// Compute the optimal route(s) and achievable rate for one scenario.
    Route {
        file: PathBuf,
        /// Which route family to compute; `auto` compares both.
        #[arg(long, value_enum, default_value = "auto")]
        mode: RouteMode,
        /// Also write the per-hop route table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sweep one parameter and write a CSV of achievable rates.
    Sweep {
        file: PathBuf,
        /// Swept variable: pf (dBm), n, or m (element counts).
        #[arg(long, value_enum)]
        var: SweepVariable,
        /// Comma-separated, strictly increasing values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the exhaustive route search (small scenarios only) and compare
    /// against the fast router.
    Oracle { file: PathBuf },
    /// Debug: dump one LoS channel matrix as CSV (row, col, re, im).
    Channel {
        file: PathBuf,
        /// Transmitting node id.
        from: usize,
        /// Receiving node id.
        to: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Io(String),
    Invalid(String),
    NoRoute,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(msg) | CliError::Invalid(msg) => write!(f, "{msg}"),
            CliError::NoRoute => write!(f, "no feasible route"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Invalid(_) => 1,
            CliError::NoRoute => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    load_scenario(&read(path)?).map_err(|e| CliError::Invalid(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { file } => {
            let diagnostics = validate_scenario_text(&read(&file)?);
            if diagnostics.is_empty() {
                println!("OK");
                Ok(())
            } else {
                for d in &diagnostics {
                    println!("{d}");
                }
                Err(CliError::Invalid(format!(
                    "{} violation(s) in {}",
                    diagnostics.len(),
                    file.display()
                )))
            }
        }
        Command::Route { file, mode, csv } => {
            let scenario = load(&file)?;
            let computation = compute_routes(&scenario, mode).map_err(|e| match e {
                ReportError::NoFeasibleRoute => CliError::NoRoute,
                other => CliError::Invalid(other.to_string()),
            })?;
            print!("{}", render_text(&scenario, &computation));
            if let Some(path) = csv {
                write(&path, &hop_table_csv(&scenario, &computation))?;
            }
            Ok(())
        }
        Command::Sweep {
            file,
            var,
            values,
            out,
        } => {
            let values = parse_values(&values)?;
            let spec = SweepSpec {
                variable: var,
                values,
                scenario: file,
                output: out,
            };
            let scenario = load(&spec.scenario)?;
            let csv = sweep_csv(&scenario, spec.variable, &spec.values)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            write(&spec.output, &csv)?;
            Ok(())
        }
        Command::Oracle { file } => {
            let scenario = load(&file)?;
            let mut any = false;
            for (label, mode) in [
                ("hybrid", OracleMode::Hybrid),
                ("passive", OracleMode::PassiveOnly),
            ] {
                match exhaustive_route_oracle(&scenario, mode) {
                    Ok(oracle) => {
                        any = true;
                        println!(
                            "{label} oracle: {}  snr={:.6e}  rate={:.6} bps/Hz",
                            path_string(&oracle.path.full_route(&scenario)),
                            oracle.snr,
                            rate_bps_hz(oracle.snr),
                        );
                        let routed = match mode {
                            OracleMode::Hybrid => route_hybrid(&scenario).map(|r| {
                                let f_ba = f_ba_closed(&scenario, &r.path).expect("hybrid");
                                let f_au = f_au_closed(&scenario, &r.path).expect("hybrid");
                                (r.path, snr_active_closed(&scenario, f_ba, f_au))
                            }),
                            OracleMode::PassiveOnly => route_passive_only(&scenario).map(|r| {
                                let f_bu = f_bu_closed(&scenario, &r.path).expect("passive");
                                (r.path, snr_passive_closed(&scenario, f_bu))
                            }),
                        };
                        match routed {
                            Ok((path, snr)) => {
                                let agree = path == oracle.path || snr == oracle.snr;
                                println!(
                                    "{label} router: {}  snr={:.6e}  [{}]",
                                    path_string(&path.full_route(&scenario)),
                                    snr,
                                    if agree { "agrees" } else { "DISAGREES" },
                                );
                            }
                            Err(e) => println!("{label} router failed: {e}"),
                        }
                    }
                    Err(RoutingError::NoPath) => {
                        println!("{label} oracle: no feasible route");
                    }
                    Err(RoutingError::InstanceTooLarge(n)) => {
                        return Err(CliError::Invalid(format!(
                            "scenario too large for exhaustive search ({n} surfaces, limit 12)"
                        )));
                    }
                    Err(e) => return Err(CliError::Invalid(e.to_string())),
                }
            }
            if any {
                Ok(())
            } else {
                Err(CliError::NoRoute)
            }
        }
        Command::Channel { file, from, to } => {
            let scenario = load(&file)?;
            let matrix = channel_matrix(&scenario, from, to)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            println!("row,col,re,im");
            for row in 0..matrix.rows() {
                for col in 0..matrix.cols() {
                    let entry = matrix.get(row, col);
                    println!("{row},{col},{},{}", sig12(entry.re), sig12(entry.im));
                }
            }
            Ok(())
        }
    }
}

fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("bad sweep value: {part:?}")))
        })
        .collect()
}
