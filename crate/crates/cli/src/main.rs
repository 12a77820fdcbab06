use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sspace_cli::{list_instances, run, RunConfig};

#[derive(Parser)]
#[command(name = "sspace", version, about = "Sampled verification of s-space catalog claims")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the claims of one or all instances and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        instance: String,
        /// structure, correspondence, morphisms, connections, naturality or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        fd_tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-check wall-clock times (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// List instance names with a short description.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for (name, anchor) in list_instances() {
                println!("{name:<22} {anchor}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify {
            instance,
            suite,
            samples,
            tol,
            fd_tol,
            seed,
            out,
            timings,
        } => {
            let config = RunConfig {
                instance,
                suite,
                samples,
                tol,
                fd_tol,
                seed,
                timings,
            };
            let report = match run(&config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let json = report.to_json();
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{json}"),
            }
            for f in report.failures() {
                eprintln!("FAIL {} (max_dev {:?}, n {})", f.name, f.max_dev, f.n);
            }
            eprintln!(
                "{}/{} checks passed",
                report.checks.len() - report.failures().count(),
                report.checks.len()
            );
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
