use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mvr_undo::bench::{run_bench, BenchConfig, BenchMode};
use mvr_undo::report;
use mvr_undo::sim::{run_scenario, DeliverySchedule, Scenario, SimOptions};

#[derive(Parser)]
#[command(
    name = "mvr-undo",
    about = "Replay register scenarios and time head resolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario file and evaluate its checks.
    Run {
        scenario: PathBuf,
        /// Emit JSON lines instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long, env = "MVR_UNDO_SEED", default_value_t = 0)]
        seed: u64,
        /// Probability of delivering an operation twice during a sync.
        #[arg(long, default_value_t = 0.0)]
        dup_rate: f64,
        /// Reorder window for operations within a sync.
        #[arg(long, default_value_t = 0)]
        reorder: usize,
        #[arg(long)]
        no_cache: bool,
    },
    /// Time head resolution on alternating undo/redo histories.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![200, 400, 600, 800])]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 1024)]
        runs: usize,
        /// Skip the cached redo mode.
        #[arg(long)]
        no_cache: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "MVR_UNDO_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            scenario,
            json,
            seed,
            dup_rate,
            reorder,
            no_cache,
        } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("{}: {e}", scenario.display());
                    return ExitCode::from(2);
                }
            };
            let parsed = match Scenario::from_json(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", scenario.display());
                    return ExitCode::from(2);
                }
            };
            if !(0.0..=1.0).contains(&dup_rate) {
                eprintln!("--dup-rate must be within [0, 1]");
                return ExitCode::from(2);
            }
            let schedule = DeliverySchedule {
                seed,
                duplication_rate: dup_rate,
                reorder_window: reorder,
            };
            let options = SimOptions {
                caching: !no_cache,
                cross_check: false,
            };
            let result = match run_scenario(&parsed, schedule, options) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{}: {e}", scenario.display());
                    return ExitCode::from(2);
                }
            };
            if json {
                emit_lines(report::run_json_lines(
                    &parsed, &result, &schedule, &options,
                ));
            } else {
                emit(&report::render_run(&parsed, &result));
            }
            if result.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Bench {
            lengths,
            runs,
            no_cache,
            json,
            seed,
        } => {
            let modes = BenchMode::ALL
                .into_iter()
                .filter(|m| !(no_cache && *m == BenchMode::RedoHeadCached))
                .collect();
            let config = BenchConfig {
                lengths,
                runs,
                modes,
                seed,
            };
            let result = match run_bench(&config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            if json {
                emit_lines(report::bench_json_lines(&result));
            } else {
                emit(&report::render_bench(&result));
            }
            ExitCode::SUCCESS
        }
    }
}

// A closed pipe (`| head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit_lines(lines: Vec<String>) {
    let mut out = std::io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}
