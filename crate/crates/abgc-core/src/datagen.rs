//! Synthetic planted-partition graphs and the published running-example
//! fixture.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::graph::BipartiteGraph;
use crate::linalg::{DenseMatrix, RandomSeed};
use crate::math;
use crate::{Error, Result};

/// Group of node `i` when `n` nodes are split into `k` nearly equal
/// contiguous groups (sizes differ by at most one).
fn group_of(i: usize, n: usize, k: usize) -> usize {
    i * k / n
}

/// Samples an attributed bipartite graph with `k` planted co-clusters.
///
/// U and V nodes are split into `k` contiguous, balanced groups. Each
/// `(u, v)` pair is an edge of weight 1 with probability `p_in` when the
/// groups match and `p_out` otherwise; sampling skips over non-edges
/// geometrically, so the cost is proportional to the number of edges
/// drawn, not to `n_u * n_v`. U attributes are orthogonal block centroids
/// (one-hot blocks scaled to unit norm, which requires
/// `attr_dim >= k`) plus isotropic Gaussian noise of scale
/// `attr_noise_sigma`. Returns the graph and the planted U labels.
#[allow(clippy::too_many_arguments)]
pub fn planted_partition_abg(
    k: usize,
    n_u: usize,
    n_v: usize,
    p_in: f64,
    p_out: f64,
    attr_dim: usize,
    attr_noise_sigma: f64,
    seed: RandomSeed,
) -> Result<(BipartiteGraph, Vec<usize>)> {
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out > p_in {
        return Err(Error::InvalidParam(alloc::format!(
            "edge probabilities need 0 <= p_out <= p_in <= 1, got p_in={}, p_out={}",
            p_in,
            p_out
        )));
    }
    if k < 1 || k > n_u || k > n_v {
        return Err(Error::InvalidParam(alloc::format!(
            "group count k={} must satisfy 1 <= k <= min(n_u={}, n_v={})",
            k,
            n_u,
            n_v
        )));
    }
    if attr_dim < k {
        return Err(Error::InvalidParam(alloc::format!(
            "attr_dim={} must be at least k={} for orthogonal group centroids",
            attr_dim,
            k
        )));
    }
    if attr_noise_sigma.is_nan() || attr_noise_sigma < 0.0 {
        return Err(Error::InvalidParam(alloc::format!(
            "attribute noise scale must be nonnegative, got {}",
            attr_noise_sigma
        )));
    }

    let mut rng = seed.rng();

    // Contiguous V-group boundaries [lo, hi) for geometric-skip sampling.
    let mut v_bounds = Vec::with_capacity(k);
    let mut start = 0usize;
    for g in 0..k {
        let mut end = start;
        while end < n_v && group_of(end, n_v, k) == g {
            end += 1;
        }
        v_bounds.push((start, end));
        start = end;
    }

    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for u in 0..n_u {
        let gu = group_of(u, n_u, k);
        for (gv, &(lo, hi)) in v_bounds.iter().enumerate() {
            let p = if gu == gv { p_in } else { p_out };
            if p <= 0.0 {
                continue;
            }
            if p >= 1.0 {
                for v in lo..hi {
                    edges.push((u, v, 1.0));
                }
                continue;
            }
            // Geometric skipping: jump straight to the next success.
            let ln_q = math::ln(1.0 - p);
            let mut v = lo;
            loop {
                let draw: f64 = rng.gen();
                let gap = (math::ln(1.0 - draw) / ln_q) as usize;
                v = v.saturating_add(gap);
                if v >= hi {
                    break;
                }
                edges.push((u, v, 1.0));
                v += 1;
            }
        }
    }

    let mut labels = Vec::with_capacity(n_u);
    let mut attrs = DenseMatrix::zeros(n_u, attr_dim);
    let span = |g: usize| (g * attr_dim / k, (g + 1) * attr_dim / k);
    for u in 0..n_u {
        let g = group_of(u, n_u, k);
        labels.push(g);
        let (lo, hi) = span(g);
        let centroid_value = 1.0 / math::sqrt((hi - lo) as f64);
        let row = attrs.row_mut(u);
        for item in row.iter_mut().take(hi).skip(lo) {
            *item = centroid_value;
        }
        if attr_noise_sigma > 0.0 {
            for item in row.iter_mut() {
                let noise: f64 = StandardNormal.sample(&mut rng);
                *item += attr_noise_sigma * noise;
            }
        }
    }

    let graph = BipartiteGraph::new(n_u, n_v, edges, attrs, None)?;
    Ok((graph, labels))
}

/// The published 7-researcher running example: smoothed feature rows, the
/// pairwise-affinity matrix, and the reference partition, all verbatim
/// from the source figures (values rounded there to 2 and 3 decimals
/// respectively, so the affinity constants are only symmetric to within
/// that rounding).
#[derive(Debug, Clone)]
pub struct RunningExample {
    /// 7 x 3 normalized feature rows.
    pub zhat: DenseMatrix,
    /// 7 x 7 pairwise affinity constants.
    pub s: DenseMatrix,
    /// Reference 3-way partition.
    pub partition: Vec<usize>,
}

pub fn running_example_fixture() -> RunningExample {
    #[rustfmt::skip]
    let zhat = DenseMatrix::from_vec(7, 3, vec![
        0.53, 0.43, 0.72,
        0.54, 0.43, 0.72,
        0.58, 0.54, 0.61,
        0.67, 0.54, 0.52,
        0.68, 0.54, 0.49,
        0.52, 0.56, 0.64,
        0.37, 0.59, 0.72,
    ]);
    #[rustfmt::skip]
    let s = DenseMatrix::from_vec(7, 7, vec![
        0.146, 0.146, 0.143, 0.140, 0.139, 0.143, 0.143,
        0.146, 0.145, 0.143, 0.141, 0.140, 0.143, 0.143,
        0.142, 0.142, 0.146, 0.146, 0.145, 0.143, 0.142,
        0.140, 0.141, 0.144, 0.146, 0.147, 0.143, 0.138,
        0.139, 0.140, 0.144, 0.147, 0.147, 0.142, 0.137,
        0.143, 0.143, 0.144, 0.143, 0.142, 0.147, 0.146,
        0.143, 0.143, 0.142, 0.138, 0.137, 0.146, 0.148,
    ]);
    RunningExample {
        zhat,
        s,
        partition: vec![0, 0, 1, 1, 1, 2, 2],
    }
}
