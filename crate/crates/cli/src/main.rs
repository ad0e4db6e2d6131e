use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hankelkit_cli::family::{FamilyParams, FamilySpec};
use hankelkit_cli::input::{parse_document, InputDocument};
use hankelkit_cli::pipeline::{analyze, analyze_family, AnalyzeOptions};
use hankelkit_cli::report::AnalysisReport;
use hankelkit_cli::suite::{any_failed, print_table, run_suite, SuiteOptions};
use hankelkit_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "hankelkit", version, about = "Classify Hankel tensors and reproduce the PSD/SOS criteria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a generating vector or family document read from a file.
    Analyze {
        /// JSON document: {"m", "n", "v"} or {"family", "params"}.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Build a named family instance and analyze it.
    Family {
        /// One of truncated, quasi-truncated, noncd, moment, vandermonde.
        name: String,
        #[command(flatten)]
        params: FamilyParams,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Run every reproduction criterion and print a pass/fail table.
    VerifySuite {
        /// Multiplies every tolerance; below 1 tightens them.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
        /// Corrupt the reference constant of one criterion (harness hook).
        #[arg(long, hide = true)]
        inject_fault: Option<u8>,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Also run the randomized refuter.
    #[arg(long)]
    refute: bool,
    /// Refuter start count.
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Seed for every randomized search; recorded in the report.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print only the verdict line.
    #[arg(long)]
    quiet: bool,
    /// Perturb certificates before verification (harness hook).
    #[arg(long, hide = true)]
    corrupt_certificates: bool,
}

impl RunFlags {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            refute: self.refute,
            starts: self.starts,
            seed: self.seed,
            corrupt_certificates: self.corrupt_certificates,
            ..AnalyzeOptions::default()
        }
    }

    fn emit(&self, report: &AnalysisReport) -> CliResult<()> {
        if let Some(path) = &self.out {
            std::fs::write(path, report.to_json())?;
        }
        let mut stdout = io::stdout().lock();
        if self.quiet {
            writeln!(stdout, "{}", report.verdict_line())?;
        } else if self.out.is_none() {
            stdout.write_all(report.to_json().as_bytes())?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Analyze { input, run } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", input.display())))?;
            let report = match parse_document(&text)? {
                InputDocument::Vector(gen) => analyze(gen, None, None, &run.options())?,
                InputDocument::Family(spec) => analyze_family(spec, &run.options())?,
            };
            run.emit(&report)?;
        }
        Command::Family { name, params, run } => {
            let spec = FamilySpec::resolve(&name, &params)?;
            let report = analyze_family(spec, &run.options())?;
            run.emit(&report)?;
        }
        Command::VerifySuite { tolerance_scale, inject_fault } => {
            if !(tolerance_scale > 0.0 && tolerance_scale.is_finite()) {
                return Err(CliError::Input(format!("--tolerance-scale must be positive, got {tolerance_scale}")));
            }
            let outcomes = run_suite(SuiteOptions { tolerance_scale, inject_fault });
            print_table(&outcomes, &mut io::stdout().lock())?;
            if any_failed(&outcomes) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hankelkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
