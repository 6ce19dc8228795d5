//! End-to-end orchestration: configuration, the three timed phases, and
//! the key=value metrics report.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use abgc_core::embed::{
    build_random_feature_map, compute_smoothed_features_with_threads, reduce_attribute_dim,
    EmbedConfig,
};
use abgc_core::factorize::{run_onmf, FactorizeConfig};
use abgc_core::graph::BipartiteGraph;
use abgc_core::linalg::RandomSeed;
use abgc_core::metrics::{accuracy, ari, nmi};
use abgc_core::rounding::{extract_labels, generate_nci};
use anyhow::{bail, Context, Result};

use crate::formats;

/// Which side of the bipartite graph gets clustered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSide {
    U,
    V,
}

/// Numeric knobs of a clustering run, independent of any file paths.
#[derive(Debug, Clone)]
pub struct ClusterParams {
    pub k: usize,
    pub alpha: f64,
    pub gamma: usize,
    /// `None` disables attribute dimension reduction.
    pub reduced_dim: Option<usize>,
    pub t_f: usize,
    pub t_g: usize,
    pub seed: u64,
    /// Thread budget for the sparse kernels; results do not depend on it.
    pub threads: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            k: 2,
            alpha: 0.6,
            gamma: 5,
            reduced_dim: Some(64),
            t_f: 5,
            t_g: 20,
            seed: 42,
            threads: 1,
        }
    }
}

/// Wall-clock seconds per phase, excluding parsing and output writing.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub embed: f64,
    pub factorize: f64,
    pub rounding: f64,
}

impl PhaseTimings {
    pub fn total(&self) -> f64 {
        self.embed + self.factorize + self.rounding
    }
}

/// A full file-driven run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub edges: PathBuf,
    pub attrs_u: PathBuf,
    pub attrs_v: Option<PathBuf>,
    /// Optional ground-truth labels; enables the metric lines in the report.
    pub truth_labels: Option<PathBuf>,
    pub target_side: TargetSide,
    pub params: ClusterParams,
    /// Label output path; `None` means the caller prints to stdout.
    pub out: Option<PathBuf>,
    /// Report output path; `None` means the caller prints it.
    pub metrics_out: Option<PathBuf>,
}

/// Result of [`run_pipeline`]: labels, timing, and the rendered report.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub labels: Vec<usize>,
    pub timings: PhaseTimings,
    pub report: String,
    pub labels_written: bool,
    pub report_written: bool,
}

fn validate(params: &ClusterParams, n_u: usize) -> Result<()> {
    if params.k == 0 {
        bail!("k must be at least 1");
    }
    if params.k > n_u {
        bail!("k = {} exceeds the {} target-side nodes", params.k, n_u);
    }
    if !(0.0..=1.0).contains(&params.alpha) {
        bail!("alpha must lie in [0, 1], got {}", params.alpha);
    }
    if params.reduced_dim == Some(0) {
        bail!("reduced dimension must be at least 1 (or \"off\")");
    }
    if params.t_g == 0 {
        bail!("t_g must be at least 1");
    }
    if params.threads == 0 {
        bail!("thread budget must be at least 1");
    }
    Ok(())
}

/// Runs the three clustering phases on an in-memory graph.
///
/// Timing covers compute only. `k = 1` short-circuits to the all-zero
/// labeling. The base seed feeds three derived streams: attribute
/// reduction, the random feature map, and the factorization seeding.
pub fn run_on_graph(
    g: &BipartiteGraph,
    params: &ClusterParams,
) -> Result<(Vec<usize>, PhaseTimings)> {
    validate(params, g.n_u())?;
    if params.k == 1 {
        return Ok((vec![0; g.n_u()], PhaseTimings::default()));
    }
    let seed = RandomSeed::new(params.seed);
    let mut timings = PhaseTimings::default();

    let start = Instant::now();
    let l = g.build_normalized_adjacency();
    let reduced;
    let x = match params.reduced_dim {
        Some(d) => {
            reduced = reduce_attribute_dim(g.attrs_u(), d, seed.derive(1))?;
            &reduced
        }
        None => g.attrs_u(),
    };
    let cfg = EmbedConfig {
        alpha: params.alpha,
        gamma: params.gamma,
        reduced_dim: params.reduced_dim,
        seed,
    };
    let feats = compute_smoothed_features_with_threads(&l, x, &cfg, params.threads)?;
    let r = build_random_feature_map(&feats, seed.derive(2));
    timings.embed = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let factors = run_onmf(
        &r,
        &FactorizeConfig::new(params.k, params.t_f, seed.derive(3)),
    )?;
    timings.factorize = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let y = generate_nci(&factors.upsilon, params.t_g);
    let labels = extract_labels(&y);
    timings.rounding = start.elapsed().as_secs_f64();

    Ok((labels, timings))
}

/// Renders the flat key=value report. Metric lines appear only when truth
/// labels are supplied.
pub fn metrics_report(
    labels: &[usize],
    truth: Option<&[usize]>,
    k: usize,
    timings: &PhaseTimings,
) -> Result<String> {
    let mut out = String::new();
    if let Some(truth) = truth {
        out.push_str(&format!("acc={:.6}\n", accuracy(truth, labels)?));
        out.push_str(&format!("nmi={:.6}\n", nmi(truth, labels)?));
        out.push_str(&format!("ari={:.6}\n", ari(truth, labels)?));
    }
    out.push_str(&format!("k={k}\n"));
    out.push_str(&format!("n={}\n", labels.len()));
    out.push_str(&format!("runtime_seconds_embed={:.6}\n", timings.embed));
    out.push_str(&format!(
        "runtime_seconds_factorize={:.6}\n",
        timings.factorize
    ));
    out.push_str(&format!(
        "runtime_seconds_rounding={:.6}\n",
        timings.rounding
    ));
    out.push_str(&format!("runtime_seconds_total={:.6}\n", timings.total()));
    Ok(out)
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Loads the input files, clusters, and writes whatever output paths are
/// configured. Label/report text for unset paths is left to the caller via
/// the returned outcome.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    let edge_text = read(&cfg.edges)?;
    let parsed = formats::parse_edges(&edge_text)
        .with_context(|| format!("parsing {}", cfg.edges.display()))?;
    let attrs_u = formats::parse_attributes(&read(&cfg.attrs_u)?)
        .with_context(|| format!("parsing {}", cfg.attrs_u.display()))?;
    let attrs_v = match &cfg.attrs_v {
        Some(path) => Some(
            formats::parse_attributes(&read(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
        ),
        None => None,
    };
    if cfg.target_side == TargetSide::V && attrs_v.is_none() {
        bail!("clustering the V side requires --attrs-v");
    }
    let truth = match &cfg.truth_labels {
        Some(path) => Some(
            formats::parse_labels(&read(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
        ),
        None => None,
    };

    let mut graph = BipartiteGraph::new(parsed.n_u, parsed.n_v, parsed.edges, attrs_u, attrs_v)
        .with_context(|| format!("building the graph from {}", cfg.edges.display()))?;
    if cfg.target_side == TargetSide::V {
        graph = graph.swap_sides()?;
    }
    if let Some(truth) = &truth {
        if truth.len() != graph.n_u() {
            bail!(
                "truth labels cover {} nodes but the target side has {}",
                truth.len(),
                graph.n_u()
            );
        }
    }

    let (labels, timings) = run_on_graph(&graph, &cfg.params)?;
    let report = metrics_report(&labels, truth.as_deref(), cfg.params.k, &timings)?;

    let mut labels_written = false;
    if let Some(path) = &cfg.out {
        fs::write(path, formats::write_labels(&labels))
            .with_context(|| format!("writing {}", path.display()))?;
        labels_written = true;
    }
    let mut report_written = false;
    if let Some(path) = &cfg.metrics_out {
        fs::write(path, &report).with_context(|| format!("writing {}", path.display()))?;
        report_written = true;
    }

    Ok(PipelineOutcome {
        labels,
        timings,
        report,
        labels_written,
        report_written,
    })
}

/// Scores a prediction file against a truth file.
pub fn eval_files(pred: &PathBuf, truth: &PathBuf) -> Result<String> {
    let pred_labels = formats::parse_labels(&read(pred)?)
        .with_context(|| format!("parsing {}", pred.display()))?;
    let truth_labels = formats::parse_labels(&read(truth)?)
        .with_context(|| format!("parsing {}", truth.display()))?;
    if pred_labels.len() != truth_labels.len() {
        bail!(
            "prediction has {} labels, truth has {}",
            pred_labels.len(),
            truth_labels.len()
        );
    }
    let mut out = String::new();
    out.push_str(&format!(
        "acc={:.6}\n",
        accuracy(&truth_labels, &pred_labels)?
    ));
    out.push_str(&format!("nmi={:.6}\n", nmi(&truth_labels, &pred_labels)?));
    out.push_str(&format!("ari={:.6}\n", ari(&truth_labels, &pred_labels)?));
    out.push_str(&format!("n={}\n", truth_labels.len()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use abgc_core::datagen::planted_partition_abg;

    #[test]
    fn k_of_one_short_circuits() {
        let (g, _) =
            planted_partition_abg(2, 20, 20, 0.5, 0.1, 4, 0.1, RandomSeed::new(3)).unwrap();
        let params = ClusterParams {
            k: 1,
            ..ClusterParams::default()
        };
        let (labels, timings) = run_on_graph(&g, &params).unwrap();
        assert_eq!(labels, vec![0; 20]);
        assert_eq!(timings.total(), 0.0);
    }

    #[test]
    fn identical_seeds_give_identical_labels() {
        let (g, _) =
            planted_partition_abg(3, 45, 30, 0.5, 0.05, 9, 0.1, RandomSeed::new(8)).unwrap();
        let params = ClusterParams {
            k: 3,
            ..ClusterParams::default()
        };
        let (a, _) = run_on_graph(&g, &params).unwrap();
        let (b, _) = run_on_graph(&g, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thread_budget_does_not_change_labels() {
        let (g, _) =
            planted_partition_abg(3, 45, 30, 0.5, 0.05, 9, 0.1, RandomSeed::new(8)).unwrap();
        let base = ClusterParams {
            k: 3,
            ..ClusterParams::default()
        };
        let threaded = ClusterParams {
            threads: 4,
            ..base.clone()
        };
        let (a, _) = run_on_graph(&g, &base).unwrap();
        let (b, _) = run_on_graph(&g, &threaded).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_configs_are_rejected_before_compute() {
        let (g, _) =
            planted_partition_abg(2, 10, 10, 0.5, 0.1, 4, 0.1, RandomSeed::new(3)).unwrap();
        let bad_k = ClusterParams {
            k: 11,
            ..ClusterParams::default()
        };
        assert!(run_on_graph(&g, &bad_k).is_err());
        let bad_alpha = ClusterParams {
            k: 2,
            alpha: 1.5,
            ..ClusterParams::default()
        };
        assert!(run_on_graph(&g, &bad_alpha).is_err());
        let bad_tg = ClusterParams {
            k: 2,
            t_g: 0,
            ..ClusterParams::default()
        };
        assert!(run_on_graph(&g, &bad_tg).is_err());
    }

    #[test]
    fn report_includes_metrics_only_with_truth() {
        let timings = PhaseTimings {
            embed: 0.25,
            factorize: 0.5,
            rounding: 0.25,
        };
        let labels = vec![0, 1, 1, 0];
        let with = metrics_report(&labels, Some(&[0, 1, 1, 0]), 2, &timings).unwrap();
        assert!(with.contains("acc=1.000000"));
        assert!(with.contains("runtime_seconds_total=1.000000"));
        let without = metrics_report(&labels, None, 2, &timings).unwrap();
        assert!(!without.contains("acc="));
        assert!(without.contains("n=4"));
    }
}
