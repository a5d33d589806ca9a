//! Command-line interface for the tracking engine.

mod commands;
mod config;
mod logging;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "thermotrack",
    version,
    about = "Correlation-filter tracking for grayscale and thermal-style video"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub(crate) enum ProtocolArg {
    /// Reset-based protocol (accuracy, robustness, expected overlap).
    Vot,
    /// One-pass evaluation (success plot / AUC).
    Ope,
}

#[derive(Subcommand)]
enum Command {
    /// Track a target through one sequence and write the trajectory.
    Track {
        /// Sequence directory (frames + groundtruth.txt).
        #[arg(long)]
        sequence: PathBuf,
        /// Configuration file (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the tracker over a dataset and write reports.
    Eval {
        /// Dataset root (one subdirectory per sequence).
        #[arg(long)]
        dataset: PathBuf,
        /// Evaluation protocol.
        #[arg(long, value_enum, default_value_t = ProtocolArg::Vot)]
        protocol: ProtocolArg,
        /// Report output directory.
        #[arg(long)]
        report: PathBuf,
        /// Configuration file (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker pool size (defaults to the logical CPU count).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Generate a synthetic sequence with exact ground truth.
    Synth {
        /// Synthesis spec file (`key = value`).
        #[arg(long)]
        spec: PathBuf,
        /// Output sequence directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Gradient-magnitude histogram of an image directory.
    Stats {
        /// Directory of .png/.pgm images.
        #[arg(long)]
        images: PathBuf,
        /// Number of histogram bins.
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Magnitude range as `lo:hi`.
        #[arg(long, default_value = "0:182")]
        range: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a translated sequence against ground-truth images.
    TranslateScore {
        /// Directory of translated frames.
        #[arg(long)]
        pred: PathBuf,
        /// Directory of reference frames.
        #[arg(long)]
        gt: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Track {
            sequence,
            config,
            out,
        } => commands::track::run(&sequence, config.as_deref(), &out),
        Command::Eval {
            dataset,
            protocol,
            report,
            config,
            jobs,
        } => commands::eval::run(&dataset, protocol, &report, config.as_deref(), jobs),
        Command::Synth { spec, out } => commands::synth::run(&spec, &out),
        Command::Stats {
            images,
            bins,
            range,
            out,
        } => commands::stats::run(&images, bins, &range, &out),
        Command::TranslateScore { pred, gt, out } => commands::translate::run(&pred, &gt, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::FAILURE
        }
    }
}
