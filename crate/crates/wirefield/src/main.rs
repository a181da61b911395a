use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wirefield::cli::{self, CliOptions};

#[derive(Parser)]
#[command(
    name = "wirefield",
    version,
    about = "Wide-field NV magnetometry simulation and inverse analysis for magnetic nanowires"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration file; defaults apply when omitted.
    config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Omit timestamp and timings from the report so repeated runs are
    /// bitwise identical.
    #[arg(long)]
    stable_report: bool,
    /// Input file (map CSV for `fit`, OVF for `ingest-ovf`).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Render the configured wire into field/contrast/linewidth maps.
    Simulate(Common),
    /// Image all four NV axes and reconstruct the vector field.
    Vectormap(Common),
    /// Grid-search Ms and diameter against a measured map CSV.
    Fit(Common),
    /// Sweep the applied field over a bistable wire and extract the
    /// hysteresis curve.
    Hysteresis(Common),
    /// Write a micromagnetic problem description for external relaxation.
    #[command(name = "export-mif")]
    ExportMif(Common),
    /// Parse an OVF file and re-emit it canonically with a summary.
    #[command(name = "ingest-ovf")]
    IngestOvf(Common),
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (name, common) = match &args.command {
        Command::Simulate(c) => ("simulate", c),
        Command::Vectormap(c) => ("vectormap", c),
        Command::Fit(c) => ("fit", c),
        Command::Hysteresis(c) => ("hysteresis", c),
        Command::ExportMif(c) => ("export-mif", c),
        Command::IngestOvf(c) => ("ingest-ovf", c),
    };
    let opts = CliOptions {
        out_dir: common.out_dir.clone(),
        stable_report: common.stable_report,
        input: common.input.clone(),
    };
    match cli::run(name, common.config.as_deref(), &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
