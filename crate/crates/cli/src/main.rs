use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rebits_cli::config::{OutFormat, RunArgs};
use rebits_cli::output::{table8_text, RunOutput};
use rebits_cli::runner::run;
use rebits_core::FloatFormat;

/// Accuracy and cost experiments for error-tracking floating-point sums.
#[derive(Parser)]
#[command(name = "rebits", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

// parsed once, so the size of `RunArgs` does not matter
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand)]
enum Cmd {
    /// Run one kernel and write its records.
    Run(RunArgs),
    /// Print per-operation costs of every scheme, published beside measured.
    Table8 {
        #[arg(long, default_value = "f64")]
        format: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        output: Option<String>,
    },
}

const USAGE: u8 = 1;
const FAILURE: u8 = 2;

fn emit(text: &str, path: Option<&str>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::Run(args) => {
            let cfg = match args.resolve() {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(USAGE);
                }
            };
            let res = match run(&cfg, args.workers()) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(FAILURE);
                }
            };
            let out = RunOutput::new(cfg.clone(), res.records);
            if let Err(e) = out.encode(cfg.out).and_then(|t| emit(&t, cfg.output.as_deref())) {
                eprintln!("error: {e:#}");
                return ExitCode::from(FAILURE);
            }
            for r in &res.failed {
                eprintln!(
                    "adder verification failed in {}: {} of {} pairs; first: {}",
                    r.format,
                    r.failures,
                    r.pairs,
                    r.first_failure.as_deref().unwrap_or("?")
                );
            }
            if res.failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(FAILURE)
            }
        }
        Cmd::Table8 { format, out, output } => {
            let rows = match FloatFormat::parse(&format).ok().and_then(rebits_core::table8::table8) {
                Some(r) => r,
                None => {
                    eprintln!("error: table8 needs --format f32 or f64");
                    return ExitCode::from(USAGE);
                }
            };
            match table8_text(&rows, out).and_then(|t| emit(&t, output.as_deref())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(FAILURE)
                }
            }
        }
    }
}
