//! End-to-end run: load, normalize, weight, solve, label, score.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::Error;
use crate::io::{
    generate_blobs, load_csv, load_idx, load_label_file, normalize, BlobSpec, LabelColumn,
    Normalization,
};
use crate::labeling::extract_labels;
use crate::metrics::{nmi_score, rand_index};
use crate::solver::{run_with_coefficients, SolverConfig};
use crate::weights::{build_knn_weights, build_lifted};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Where the samples come from.
#[derive(Clone, Debug)]
pub enum InputSource {
    Csv {
        path: PathBuf,
        label_column: Option<LabelColumn>,
    },
    Idx {
        images: PathBuf,
        labels: PathBuf,
        count: Option<usize>,
    },
    Blobs(BlobSpec),
    Memory(DataMatrix),
}

impl InputSource {
    fn describe(&self) -> String {
        match self {
            Self::Csv { path, .. } => format!("csv:{}", path.display()),
            Self::Idx { images, .. } => format!("idx:{}", images.display()),
            Self::Blobs(spec) => format!("blobs:seed={}", spec.seed),
            Self::Memory(_) => "memory".to_string(),
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Self::Blobs(spec) => Some(spec.seed),
            _ => None,
        }
    }

    pub fn load(&self) -> Result<DataMatrix, Error> {
        match self {
            Self::Csv { path, label_column } => load_csv(path, label_column.as_ref()),
            Self::Idx {
                images,
                labels,
                count,
            } => load_idx(images, labels, *count),
            Self::Blobs(spec) => generate_blobs(spec),
            Self::Memory(data) => Ok(data.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineArgs {
    pub source: InputSource,
    pub config: SolverConfig,
    pub normalize: Normalization,
    /// Overrides the relative zero-tolerance rule of the labeling step.
    pub zero_tol: Option<f64>,
    /// Score this label file against the true labels instead of solving.
    pub score_external: Option<PathBuf>,
}

/// Pipeline step an error came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Load,
    Weights,
    Solve,
    Label,
    Score,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Load => "load",
            Self::Weights => "weights",
            Self::Solve => "solve",
            Self::Label => "label",
            Self::Score => "score",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T> StageExt<T> for Result<T, Error> {
    fn stage(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMode {
    Solve,
    ScoreExternal,
}

/// Inputs echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub solver: SolverConfig,
    pub normalize: Normalization,
    pub zero_tol: Option<f64>,
    pub seed: Option<u64>,
    pub source: String,
}

/// Machine-readable result of one pipeline run.
///
/// In `solve` mode the traces hold `iterations + 1` entries. In
/// `score_external` mode no solve happens: traces are empty, `iterations` is 0
/// and the objective fields are absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub mode: ReportMode,
    pub n: usize,
    pub d: usize,
    pub labels: Vec<usize>,
    pub num_clusters: usize,
    pub ri: Option<f64>,
    pub nmi: Option<f64>,
    pub nmi_degenerate: Option<bool>,
    pub converged: bool,
    pub iterations: usize,
    pub final_objective: Option<f64>,
    pub final_feasibility: Option<f64>,
    pub zero_tol: Option<f64>,
    pub objective_trace: Vec<f64>,
    pub feasibility_trace: Vec<f64>,
    pub wall_time_seconds: f64,
    pub config_echo: ConfigEcho,
}

impl RunReport {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn distinct(labels: &[usize]) -> usize {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

pub fn run_pipeline(args: &PipelineArgs) -> Result<RunReport, PipelineError> {
    let start = Instant::now();
    let raw = args.source.load().stage(Stage::Load)?;
    let data = normalize(&raw, args.normalize);
    let echo = ConfigEcho {
        solver: args.config.clone(),
        normalize: args.normalize,
        zero_tol: args.zero_tol,
        seed: args.source.seed(),
        source: args.source.describe(),
    };

    if let Some(path) = &args.score_external {
        let truth = data.true_labels().ok_or_else(|| PipelineError {
            stage: Stage::Score,
            source: Error::InvalidInput("external scoring needs true labels".into()),
        })?;
        let external = load_label_file(path).stage(Stage::Load)?;
        let ri = rand_index(truth, &external).stage(Stage::Score)?;
        let nmi = nmi_score(truth, &external).stage(Stage::Score)?;
        return Ok(RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            mode: ReportMode::ScoreExternal,
            n: data.n(),
            d: data.d(),
            num_clusters: distinct(&external),
            labels: external,
            ri: Some(ri),
            nmi: Some(nmi.value),
            nmi_degenerate: Some(nmi.degenerate),
            converged: true,
            iterations: 0,
            final_objective: None,
            final_feasibility: None,
            zero_tol: None,
            objective_trace: Vec::new(),
            feasibility_trace: Vec::new(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            config_echo: echo,
        });
    }

    args.config.validate(data.n()).stage(Stage::Weights)?;
    let graph =
        build_knn_weights(&data, args.config.knn_k, args.config.phi).stage(Stage::Weights)?;
    let coeffs = build_lifted(&data, &graph).stage(Stage::Weights)?;
    let state = run_with_coefficients(&coeffs, &args.config).stage(Stage::Solve)?;
    if let Some(tol) = args.zero_tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(PipelineError {
                stage: Stage::Label,
                source: Error::InvalidParameter(format!("zero tolerance {tol} must be >= 0")),
            });
        }
    }
    let labeling = extract_labels(&state, args.zero_tol);

    let (ri, nmi) = match data.true_labels() {
        Some(truth) => (
            Some(rand_index(truth, &labeling.labels).stage(Stage::Score)?),
            Some(nmi_score(truth, &labeling.labels).stage(Stage::Score)?),
        ),
        None => (None, None),
    };

    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: ReportMode::Solve,
        n: data.n(),
        d: data.d(),
        labels: labeling.labels,
        num_clusters: labeling.num_clusters,
        ri,
        nmi: nmi.map(|s| s.value),
        nmi_degenerate: nmi.map(|s| s.degenerate),
        converged: state.converged,
        iterations: state.iteration,
        final_objective: Some(state.final_objective()),
        final_feasibility: Some(state.final_feasibility()),
        zero_tol: Some(labeling.zero_tol),
        objective_trace: state.objective_trace,
        feasibility_trace: state.feasibility_trace,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        config_echo: echo,
    })
}
