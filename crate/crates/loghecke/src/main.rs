use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use loghecke::{run_batch, run_file, Command, RunOptions};

/// Exact checks for logarithmic Hecke presentations on the punctured
/// rational curve.
///
/// Exit codes: 0 all checked conditions hold, 1 some condition fails,
/// 2 invalid input, 3 unsupported instance.
#[derive(Parser, Debug)]
#[command(name = "loghecke", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Instance file (JSON).
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    input: Option<PathBuf>,
    /// Seed for all sampling [default: instance option, else 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Number of samples for `roundtrip` [default: instance option, else 20].
    #[arg(long)]
    samples: Option<usize>,
    /// Run every `*.json` file in this directory concurrently.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { seed: cli.seed, samples: cli.samples };
    let (text, code) = if let Some(dir) = &cli.batch {
        match run_batch(cli.command, dir, opts) {
            Ok(b) => (serde_json::to_string_pretty(&b).expect("report serializes"), b.exit_code),
            Err(e) => {
                eprintln!("loghecke: cannot read directory {}: {e}", dir.display());
                return ExitCode::from(2);
            }
        }
    } else {
        let path = cli.input.as_ref().expect("clap enforces --input or --batch");
        let r = run_file(cli.command, path, opts);
        (serde_json::to_string_pretty(&r).expect("report serializes"), r.exit_code)
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text + "\n") {
                eprintln!("loghecke: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => {
            let mut out = io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("loghecke: cannot write report: {e}");
                    return ExitCode::from(2);
                }
            }
        }
    }
    ExitCode::from(code as u8)
}
