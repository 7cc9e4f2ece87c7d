//! `kpca-lab`: run the PCA / kernel PCA experiments from the command line.
//!
//! Exit codes: 0 success, 1 error, 2 usage error, 3 outputs written but some
//! pre-image iteration did not converge or diverged.

mod commands;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kpca-lab", version, about = "PCA, kernel PCA and shape-model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pca,
    Kpca,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Linear,
    Poly,
    Gaussian,
}

/// `auto` or a positive width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma {
    Auto,
    Value(f64),
}

impl FromStr for Sigma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Sigma::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Sigma::Value(v)),
            _ => Err(format!("expected `auto` or a positive number, got {s:?}")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the two-spheres dataset.
    GenSpheres {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 40.0)]
        r1: f64,
        #[arg(long, default_value_t = 100.0)]
        r2: f64,
        #[arg(long, default_value_t = 1.0)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Fit PCA or kernel PCA and write the projected features, the model and a scatter plot.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Kpca)]
        method: Method,
        /// Kernel for --method kpca [default: gaussian].
        #[arg(long, value_enum)]
        kernel: Option<KernelKind>,
        /// Polynomial degree [default: 5].
        #[arg(long)]
        degree: Option<u32>,
        /// Polynomial offset [default: 0].
        #[arg(long)]
        offset: Option<f64>,
        /// Gaussian width, or `auto` for the nearest-neighbour heuristic [default: auto].
        #[arg(long)]
        sigma: Option<Sigma>,
        #[arg(long, default_value_t = 2)]
        components: usize,
        /// Single-column label CSV, used to colour the scatter plot.
        #[arg(long, conflicts_with = "labels_col")]
        labels: Option<PathBuf>,
        /// Zero-based column of the input holding labels; removed from the features.
        #[arg(long)]
        labels_col: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Apply a saved model to new rows.
    Transform {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Train the least-squares classifier and report error rates.
    Classify {
        #[arg(long)]
        train_features: PathBuf,
        #[arg(long)]
        train_labels: PathBuf,
        #[arg(long, requires = "test_labels")]
        test_features: Option<PathBuf>,
        #[arg(long, requires = "test_features")]
        test_labels: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Reconstruct input-space points from kernel PCA features.
    Preimage {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Sweep one shape-model feature over a directory of PTS files and render each step.
    AsmSweep {
        #[arg(long)]
        pts_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Pca)]
        method: Method,
        /// One-based feature index.
        #[arg(long, default_value_t = 1)]
        feature: usize,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Kernel sweep half-range in training standard deviations.
        #[arg(long, default_value_t = 500.0)]
        c: f64,
        /// Kernel components kept for the pre-images.
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value = "auto")]
        sigma: Sigma,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Landmark role map; defaults to the 20-point BioID layout.
        #[arg(long)]
        roles: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("KPCA_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow::anyhow!("KPCA_LAB_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(commands::Status::Complete) => ExitCode::SUCCESS,
        Ok(commands::Status::NotConverged) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
