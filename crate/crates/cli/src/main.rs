use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prolong_core::compute::{compute, list_examples, ComputeError};
use prolong_core::{verify, Suite, VerifyError, VerifyOptions};

/// Verification harness for prolonged representations and their bundles.
#[derive(Parser)]
#[command(name = "prolong", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a property suite against a catalog example.
    Verify {
        #[arg(long)]
        example: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override a tolerance, e.g. `--tol right_action=1e-8`.
        #[arg(long = "tol", value_name = "KEY=VAL", value_parser = parse_tolerance)]
        tolerances: Vec<(String, f64)>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        report: ReportFormat,
        /// Also compare the direct lower-block inverse-action formula.
        #[arg(long)]
        paper_variant: bool,
        /// Replace sigma by 2 sigma (negative control).
        #[arg(long)]
        corrupt_rep: bool,
        /// Record wall-clock time in `duration_ms`.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate one operation on a JSON document.
    Compute {
        #[arg(long)]
        op: String,
        /// Input file, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Print the example catalog as JSON.
    ListExamples,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VAL")?;
    let v: f64 = v.parse().map_err(|e| format!("bad value `{v}`: {e}"))?;
    Ok((k.to_string(), v))
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Verify { example, suite, samples, seed, tolerances, report, paper_variant, corrupt_rep, timing } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let mut options = VerifyOptions::new(example, suite, samples, seed);
            options.tolerance_overrides = tolerances.into_iter().collect::<BTreeMap<_, _>>();
            options.paper_variant = paper_variant;
            options.corrupt_representation = corrupt_rep;
            options.timing = timing;
            match verify(&options) {
                Ok(r) => {
                    match report {
                        ReportFormat::Json => println!("{}", r.to_json()),
                        ReportFormat::Text => print!("{}", r.to_text()),
                    }
                    if r.overall {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(VerifyError::Usage(msg)) => usage(msg),
                Err(VerifyError::Op(e)) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Compute { op, input } => {
            let text = if input == "-" {
                let mut buf = String::new();
                match std::io::stdin().read_to_string(&mut buf) {
                    Ok(_) => buf,
                    Err(e) => return usage(format!("reading stdin: {e}")),
                }
            } else {
                match std::fs::read_to_string(&input) {
                    Ok(t) => t,
                    Err(e) => return usage(format!("reading {input}: {e}")),
                }
            };
            match compute(&op, &text) {
                Ok((doc, ok)) => {
                    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(ComputeError::Schema(msg)) => usage(format!("schema error: {msg}")),
                Err(ComputeError::Op(e)) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::ListExamples => {
            println!("{}", serde_json::to_string_pretty(&list_examples()).expect("json"));
            ExitCode::SUCCESS
        }
    }
}
