//! `abgc`: cluster the target side of an attributed bipartite graph.

use std::path::PathBuf;
use std::str::FromStr;

use abgc::formats;
use abgc::pipeline::{self, ClusterParams, PipelineConfig, TargetSide};
use abgc_core::datagen::planted_partition_abg;
use abgc_core::embed::{compute_smoothed_features, EmbedConfig};
use abgc_core::graph::BipartiteGraph;
use abgc_core::linalg::RandomSeed;
use abgc_core::oracle::{brute_force_best_partition, exact_msa_matrix};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

/// Reduced attribute dimension: a positive integer, or "off" to disable.
#[derive(Debug, Clone, Copy)]
struct Dim(Option<usize>);

impl FromStr for Dim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("off") {
            return Ok(Dim(None));
        }
        match s.parse::<usize>() {
            Ok(d) if d >= 1 => Ok(Dim(Some(d))),
            _ => Err(format!("expected a positive integer or \"off\", got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
enum Side {
    U,
    V,
}

#[derive(Debug, Parser)]
#[command(
    name = "abgc",
    version,
    about = "Attributed bipartite graph clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a graph read from edge and attribute files.
    Cluster(ClusterArgs),
    /// Score a predicted label file against a ground-truth label file.
    Eval {
        /// Predicted labels, one integer per line.
        pred: PathBuf,
        /// Ground-truth labels, one integer per line.
        truth: PathBuf,
    },
    /// Generate a planted-partition benchmark graph.
    Gen(GenArgs),
    /// Exact brute-force reference solver for tiny graphs.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Parser)]
struct ClusterArgs {
    /// Edge list file ('u v [weight]' lines, optional '#abg n_u n_v' header).
    #[arg(long)]
    edges: PathBuf,
    /// U-side attribute file ('#dense r c' or '#coo r c' header).
    #[arg(long)]
    attrs_u: PathBuf,
    /// V-side attribute file; required when clustering the V side.
    #[arg(long)]
    attrs_v: Option<PathBuf>,
    /// Ground-truth label file; adds acc/nmi/ari to the report.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    /// Smoothing coefficient in [0, 1].
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    /// Number of smoothing hops.
    #[arg(long, default_value_t = 5)]
    gamma: usize,
    /// Reduced attribute dimension, or "off".
    #[arg(long, default_value = "64")]
    dim: Dim,
    /// Factorization iterations.
    #[arg(long, default_value_t = 5)]
    tf: usize,
    /// Rounding iterations.
    #[arg(long, default_value_t = 20)]
    tg: usize,
    /// Seed for every randomized kernel.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Which side of the graph to cluster.
    #[arg(long, value_enum, default_value_t = Side::U)]
    target_side: Side,
    /// Label output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report output file; stdout/stderr when omitted.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
struct GenArgs {
    /// Number of planted clusters.
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n_u: usize,
    #[arg(long)]
    n_v: usize,
    /// Within-group edge probability.
    #[arg(long, default_value_t = 0.3)]
    p_in: f64,
    /// Cross-group edge probability.
    #[arg(long, default_value_t = 0.01)]
    p_out: f64,
    /// U-side attribute dimension.
    #[arg(long, default_value_t = 32)]
    attr_dim: usize,
    /// Attribute noise scale.
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    edges_out: PathBuf,
    #[arg(long)]
    attrs_out: PathBuf,
    #[arg(long)]
    labels_out: PathBuf,
}

#[derive(Debug, Parser)]
struct OracleArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    attrs_u: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    #[arg(long, default_value_t = 5)]
    gamma: usize,
}

fn thread_budget() -> Result<usize> {
    match std::env::var("ABGC_THREADS") {
        Ok(raw) => {
            let n = raw
                .trim()
                .parse::<usize>()
                .with_context(|| format!("ABGC_THREADS must be a positive integer, got {raw:?}"))?;
            if n == 0 {
                bail!("ABGC_THREADS must be at least 1");
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(err) => Err(err).context("reading ABGC_THREADS"),
    }
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let cfg = PipelineConfig {
        edges: args.edges,
        attrs_u: args.attrs_u,
        attrs_v: args.attrs_v,
        truth_labels: args.labels,
        target_side: match args.target_side {
            Side::U => TargetSide::U,
            Side::V => TargetSide::V,
        },
        params: ClusterParams {
            k: args.k,
            alpha: args.alpha,
            gamma: args.gamma,
            reduced_dim: args.dim.0,
            t_f: args.tf,
            t_g: args.tg,
            seed: args.seed,
            threads: thread_budget()?,
        },
        out: args.out,
        metrics_out: args.metrics_out,
    };
    let outcome = pipeline::run_pipeline(&cfg)?;
    let labels_on_stdout = !outcome.labels_written;
    if labels_on_stdout {
        print!("{}", formats::write_labels(&outcome.labels));
    }
    if !outcome.report_written {
        if labels_on_stdout {
            eprint!("{}", outcome.report);
        } else {
            print!("{}", outcome.report);
        }
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let (graph, truth) = planted_partition_abg(
        args.k,
        args.n_u,
        args.n_v,
        args.p_in,
        args.p_out,
        args.attr_dim,
        args.sigma,
        RandomSeed::new(args.seed),
    )?;
    std::fs::write(
        &args.edges_out,
        formats::write_edges(graph.n_u(), graph.n_v(), graph.edges()),
    )
    .with_context(|| format!("writing {}", args.edges_out.display()))?;
    std::fs::write(
        &args.attrs_out,
        formats::write_dense_attributes(graph.attrs_u()),
    )
    .with_context(|| format!("writing {}", args.attrs_out.display()))?;
    std::fs::write(&args.labels_out, formats::write_labels(&truth))
        .with_context(|| format!("writing {}", args.labels_out.display()))?;
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let edge_text = std::fs::read_to_string(&args.edges)
        .with_context(|| format!("reading {}", args.edges.display()))?;
    let parsed = formats::parse_edges(&edge_text)
        .with_context(|| format!("parsing {}", args.edges.display()))?;
    let attr_text = std::fs::read_to_string(&args.attrs_u)
        .with_context(|| format!("reading {}", args.attrs_u.display()))?;
    let attrs = formats::parse_attributes(&attr_text)
        .with_context(|| format!("parsing {}", args.attrs_u.display()))?;
    if parsed.n_u > 10 {
        bail!("the brute-force oracle handles at most 10 target nodes");
    }
    if args.k == 0 || args.k > 4 {
        bail!("the brute-force oracle handles 1 <= k <= 4");
    }
    let graph = BipartiteGraph::new(parsed.n_u, parsed.n_v, parsed.edges, attrs, None)?;
    let l = graph.build_normalized_adjacency();
    let cfg = EmbedConfig {
        alpha: args.alpha,
        gamma: args.gamma,
        reduced_dim: None,
        seed: RandomSeed::new(0),
    };
    let feats = compute_smoothed_features(&l, graph.attrs_u(), &cfg)?;
    let s = exact_msa_matrix(feats.zhat());
    let labels = brute_force_best_partition(&s, args.k);
    print!("{}", formats::write_labels(&labels));
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Cluster(args) => cluster(args),
        Command::Eval { pred, truth } => {
            let report = pipeline::eval_files(&pred, &truth)?;
            print!("{report}");
            Ok(())
        }
        Command::Gen(args) => gen(args),
        Command::Oracle(args) => oracle(args),
    }
}
