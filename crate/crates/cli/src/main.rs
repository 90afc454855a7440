use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

#[derive(Parser)]
#[command(name = "liotkit", version, about = "Local intensity order transform toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GrayArg {
    Green,
    Luma,
}

impl From<GrayArg> for liotkit::GrayMode {
    fn from(g: GrayArg) -> Self {
        match g {
            GrayArg::Green => liotkit::GrayMode::Green,
            GrayArg::Luma => liotkit::GrayMode::Luma,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Liot,
    Naive,
    Census,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Liot,
    Census,
}

#[derive(Subcommand)]
enum Command {
    /// Transform an image into a LIOT1 container (or a census PNG).
    Transform {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value = "green")]
        gray: GrayArg,
        /// Invert intensities first, for structures brighter than their surroundings.
        #[arg(long)]
        invert: bool,
        #[arg(long, value_enum, default_value = "liot")]
        method: Method,
        /// Also write l.png, r.png, t.png and b.png into this directory.
        #[arg(long, value_name = "DIR")]
        dump_planes: Option<PathBuf>,
    },
    /// Check that strictly increasing contrast changes leave the transform unchanged.
    Invariance {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, value_enum, default_value = "green")]
        gray: GrayArg,
        #[arg(long, value_enum, default_value = "liot")]
        transform: TransformArg,
        /// Extra trial with a 256-line LUT file.
        #[arg(long, value_name = "FILE")]
        lut: Option<PathBuf>,
        /// Negative control: add a level-swapping LUT trial that must fail.
        #[arg(long, hide = true)]
        inject_swap: bool,
    },
    /// Evaluate a prediction against ground truth.
    Metrics {
        pred: PathBuf,
        gt: PathBuf,
        #[arg(long, value_name = "PATH")]
        fov: Option<PathBuf>,
        /// Treat the prediction as an 8-bit probability map and pick the F1-optimal threshold.
        #[arg(long)]
        prob: bool,
        #[arg(long, default_value = "8", value_parser = ["4", "8"])]
        connectivity: String,
        #[arg(long)]
        json: bool,
    },
    /// Preprocess a dataset directory into PNG samples plus manifest.txt.
    Dataset {
        /// drive, stare, chasedb1 or cracktree.
        #[arg(required_unless_present = "config", conflicts_with = "config")]
        name: Option<String>,
        /// Dataset root holding images/, gt/ and optionally fov/.
        #[arg(long, default_value = ".")]
        root: PathBuf,
        /// key=value description of a custom dataset.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the fast transform against the naive reference.
    Bench {
        #[arg(long, default_value = "565x584")]
        size: String,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        iters: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a 256-line LUT file.
    Lut {
        output: PathBuf,
        #[arg(long, conflicts_with = "seed")]
        gamma: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Make the random LUT strictly increasing on the levels of this image.
        #[arg(long, value_name = "IMAGE", requires = "seed")]
        levels_from: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LIOTKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("LIOTKIT_THREADS must be a non-negative integer, got `{raw}`")))?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure worker pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Transform { input, output, gray, invert, method, dump_planes } => {
            commands::transform(&input, &output, gray.into(), invert, method, dump_planes.as_deref())
        }
        Command::Invariance { input, seed, trials, gray, transform, lut, inject_swap } => {
            commands::invariance(&input, seed, trials, gray.into(), transform, lut.as_deref(), inject_swap)
        }
        Command::Metrics { pred, gt, fov, prob, connectivity, json } => {
            let adjacency = connectivity.parse().map_err(CliError::from)?;
            commands::metrics(&pred, &gt, fov.as_deref(), prob, adjacency, json)
        }
        Command::Dataset { name, root, config, out } => {
            commands::dataset(name.as_deref(), &root, config.as_deref(), &out)
        }
        Command::Bench { size, iters, seed } => commands::bench(&size, iters, seed),
        Command::Lut { output, gamma, seed, levels_from } => commands::lut(&output, gamma, seed, levels_from.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
