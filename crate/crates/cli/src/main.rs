mod args;
mod commands;
mod config;
mod error;
mod output;
mod stages;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches};

use args::Cli;
use error::{CliError, EXIT_FAILURE};
use output::Manifest;

fn report_error(e: &CliError) -> i32 {
    if let CliError::NonConvergence { diagnostics, .. } = e {
        print!("{}", output::pretty(diagnostics));
    }
    eprintln!("error: {e}");
    e.exit_code()
}

fn run(args: Vec<OsString>) -> i32 {
    let mut cmd = Cli::command();
    cmd.build();
    let mut matches = match cmd.clone().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let config_file = matches.get_one::<PathBuf>("config").cloned();
    if let Some(path) = &config_file {
        let merged = match config::merged_args(&cmd, &matches, &args, path) {
            Ok(a) => a,
            Err(e) => return report_error(&e),
        };
        matches = match cmd.clone().try_get_matches_from(&merged) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("in config {}:", path.display());
                let _ = e.print();
                return e.exit_code();
            }
        };
    }
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let resolved = config::resolved(&cmd, &matches);
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    let manifest = Manifest {
        command: cli.command.name(),
        resolved: &resolved,
        config_file: config_file.as_deref(),
    };
    if let Err(e) = output::emit(&report, cli.format, cli.out.as_deref(), &manifest) {
        return report_error(&e);
    }
    if report.failed {
        EXIT_FAILURE
    } else {
        0
    }
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}
