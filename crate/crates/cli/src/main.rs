//! `qgraph` command-line interface. Results go to standard output as CSV;
//! exit code 1 marks input errors and 2 numerical failures.

mod args;
mod checks;
mod commands;
mod csv;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{OracleRequest, Problem};
use error::CliError;

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Discrete { graph, operator, matrix } => {
            let p = Problem::load(&graph.graph, &Default::default())?;
            commands::discrete(&p, operator, matrix)
        }
        Command::Spectrum { graph, range, coupling } => {
            let (lo, hi) = range.bounds();
            commands::spectrum(&Problem::load(&graph.graph, &coupling)?, lo, hi)
        }
        Command::Scan {
            graph,
            range,
            grid,
            coupling,
        } => {
            let (lo, hi) = range.bounds();
            commands::scan(&Problem::load(&graph.graph, &coupling)?, lo, hi, grid)
        }
        Command::Qfunction { graph, z } => commands::qfunction(&Problem::load(&graph.graph, &Default::default())?, &z),
        Command::Scattering {
            graph,
            mu,
            basis,
            coupling,
        } => commands::scattering(&Problem::load(&graph.graph, &coupling)?, mu, basis),
        Command::Dirac {
            graph,
            range,
            mass,
            coupling,
        } => {
            let (lo, hi) = range.bounds();
            commands::dirac(&Problem::load(&graph.graph, &coupling)?, lo, hi, mass)
        }
        Command::DiracSym { graph, range, mass } => {
            let (lo, hi) = range.bounds();
            commands::dirac_sym(&Problem::load(&graph.graph, &Default::default())?, lo, hi, mass)
        }
        Command::Eigenfunction {
            graph,
            lambda,
            samples,
            coupling,
        } => commands::eigenfunctions(&Problem::load(&graph.graph, &coupling)?, lambda, samples),
        Command::Oracle {
            graph,
            h,
            count,
            range,
            resolve,
            levels,
            coupling,
        } => {
            let req = OracleRequest {
                h,
                count,
                range: range.map(|r| (r[0], r[1])),
                resolve,
                levels,
            };
            commands::oracle(&Problem::load(&graph.graph, &coupling)?, &req)
        }
        Command::Check {
            name,
            graph,
            seed,
            z,
            h,
            coupling,
        } => {
            let p = Problem::load(&graph.graph, &coupling)?;
            let opts = checks::CheckOptions {
                seed,
                z: commands::parse_z(&z)?,
                h,
            };
            Ok(csv::checks(&checks::run(name, &p, &opts)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
