use std::path::PathBuf;
use std::process::ExitCode;

use arens_core::operator::OperatorRegistry;
use arens_workbench::catalog::{catalog_json, catalog_text};
use arens_workbench::{demo, run_scenario, CheckRegistry, RunOptions, Scenario};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "workbench", version, about = "Exact verification of Arens extensions of multilinear operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Irregularity,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario file.
    Verify {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of random samples per check.
        #[arg(long)]
        samples: Option<usize>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall-clock times in the report.
        #[arg(long)]
        timing: bool,
    },
    /// List space kinds, operator kinds and check kinds.
    Catalog {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a bundled demonstration and print its trace.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("WORKBENCH_LOG")).init();
    let cli = Cli::parse();
    let ops = OperatorRegistry::default();
    let checks = CheckRegistry::default();
    match cli.command {
        Command::Verify { scenario, report, out, seed, samples, jobs, timing } => {
            let s = match Scenario::load(&scenario, &checks, &ops) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("workbench: {}: {e}", scenario.display());
                    return ExitCode::from(2);
                }
            };
            if jobs == Some(0) {
                eprintln!("workbench: --jobs must be at least 1");
                return ExitCode::from(2);
            }
            let r = run_scenario(&s, &checks, &RunOptions { seed, samples, jobs, timing });
            let text = match report {
                Format::Text => r.to_text(),
                Format::Json => r.to_json(),
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("workbench: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Command::Catalog { format } => {
            match format {
                Format::Text => print!("{}", catalog_text(&ops, &checks)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&catalog_json(&ops, &checks)).expect("catalog serializes")),
            }
            ExitCode::SUCCESS
        }
        Command::Demo { name: Demo::Irregularity } => match demo::irregularity() {
            Ok(t) => {
                print!("{t}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("workbench: {e}");
                ExitCode::from(if matches!(e, arens_core::Error::InvariantViolation(_)) { 3 } else { 1 })
            }
        },
    }
}
