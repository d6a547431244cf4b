use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use edm_cluster::io::{BlobSpec, LabelColumn, Normalization};
use edm_cluster::pipeline::{run_pipeline, InputSource, PipelineArgs};
use edm_cluster::solver::{SolverConfig, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Convex clustering through a Euclidean distance matrix model.
///
/// Prints a JSON report to stdout, or writes it to --output.
#[derive(Debug, Parser)]
#[command(name = "edm-cluster", version)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "idx_images", "blobs"])))]
struct Cli {
    /// Delimited text file with one sample per row.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// MNIST-style idx3 image file.
    #[arg(long, value_name = "PATH", requires = "idx_labels")]
    idx_images: Option<PathBuf>,

    /// MNIST-style idx1 label file.
    #[arg(long, value_name = "PATH", requires = "idx_images")]
    idx_labels: Option<PathBuf>,

    /// Five Gaussian blobs of 50 points, seeded by --seed.
    #[arg(long)]
    blobs: bool,

    /// Column of --input holding the true labels, by header name or 0-based index.
    #[arg(long, value_name = "NAME_OR_INDEX", requires = "input")]
    label_column: Option<LabelColumn>,

    /// Use only the first N idx samples.
    #[arg(long, value_name = "N", requires = "idx_images")]
    count: Option<usize>,

    /// Weight of the fusion term.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,

    /// Penalty parameter.
    #[arg(long, default_value_t = 10.0)]
    rho: f64,

    /// Gaussian kernel width of the neighbour weights.
    #[arg(long, default_value_t = 1.0)]
    phi: f64,

    /// Neighbours per point in the weight graph.
    #[arg(long, default_value_t = 10)]
    knn: usize,

    /// Embedding dimension of the distance matrix.
    #[arg(long, default_value_t = 2)]
    rank: usize,

    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,

    /// Centre distances at or below this are treated as zero when labelling.
    /// Defaults to a rule relative to the median centre distance.
    #[arg(long, value_name = "F")]
    zero_tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = NormalizeArg::Minmax)]
    normalize: NormalizeArg,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Score this label file against the true labels instead of solving.
    #[arg(long, value_name = "PATH")]
    score_external: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum NormalizeArg {
    Minmax,
    Zscore,
    None,
}

impl From<NormalizeArg> for Normalization {
    fn from(n: NormalizeArg) -> Self {
        match n {
            NormalizeArg::Minmax => Self::MinMax,
            NormalizeArg::Zscore => Self::ZScore,
            NormalizeArg::None => Self::None,
        }
    }
}

impl Cli {
    fn source(&self) -> InputSource {
        if let Some(path) = &self.input {
            InputSource::Csv {
                path: path.clone(),
                label_column: self.label_column.clone(),
            }
        } else if let (Some(images), Some(labels)) = (&self.idx_images, &self.idx_labels) {
            InputSource::Idx {
                images: images.clone(),
                labels: labels.clone(),
                count: self.count,
            }
        } else {
            InputSource::Blobs(BlobSpec::five_clusters(self.seed))
        }
    }

    fn pipeline_args(&self) -> PipelineArgs {
        PipelineArgs {
            source: self.source(),
            config: SolverConfig::new(self.gamma, self.rho, self.rank, self.knn, self.phi)
                .with_tol(self.tol)
                .with_max_iter(self.max_iter),
            normalize: self.normalize.into(),
            zero_tol: self.zero_tol,
            score_external: self.score_external.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run_pipeline(&cli.pipeline_args()) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let json = match report.to_json() {
        Ok(json) => json,
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return ExitCode::FAILURE;
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{json}").and_then(|()| out.flush()) {
                Ok(()) => {}
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    return ExitCode::FAILURE;
                }
            }
        }
    }
    ExitCode::SUCCESS
}
