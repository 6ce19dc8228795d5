//! Phase 1: attribute dimension reduction, multi-hop feature smoothing,
//! and the random-feature linearization of the multi-scale attribute
//! affinity.

use alloc::vec::Vec;

use crate::linalg::{
    haar_orthogonal, randomized_truncated_svd, row_l2_normalize, DenseMatrix, RandomSeed,
};
use crate::math;
use crate::{Error, Result};

/// Euler's number; the random-feature scale is sqrt(e/d).
const E: f64 = core::f64::consts::E;

/// Phase-1 parameters.
#[derive(Debug, Clone, Copy)]
pub struct EmbedConfig {
    /// Smoothing strength in `[0, 1]`; 0 keeps raw attributes.
    pub alpha: f64,
    /// Number of propagation hops.
    pub gamma: usize,
    /// Target attribute dimension; `None` disables reduction. Reduction is
    /// also a no-op whenever the target is at least the current dimension.
    pub reduced_dim: Option<usize>,
    pub seed: RandomSeed,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            alpha: 0.6,
            gamma: 5,
            reduced_dim: Some(64),
            seed: RandomSeed::new(42),
        }
    }
}

/// Smoothed node features: the row-normalized matrix used by the feature
/// map, plus the pre-normalization values for diagnostics and oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    zhat: DenseMatrix,
    raw: DenseMatrix,
}

impl FeatureMatrix {
    /// Row-normalized features; every nonzero row has unit L2 norm.
    pub fn zhat(&self) -> &DenseMatrix {
        &self.zhat
    }

    /// Pre-normalization smoothed features.
    pub fn raw(&self) -> &DenseMatrix {
        &self.raw
    }

    /// Wraps an externally produced feature matrix (rows are normalized
    /// here); mainly for tests and fixtures that start from published
    /// feature values rather than a graph.
    pub fn from_rows(m: DenseMatrix) -> FeatureMatrix {
        FeatureMatrix {
            zhat: row_l2_normalize(&m),
            raw: m,
        }
    }
}

/// Random sin/cos features whose pairwise dot products estimate the
/// multi-scale attribute affinity.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFeatureMatrix {
    r: DenseMatrix,
}

impl RandomFeatureMatrix {
    /// The `n x 2d` feature matrix R.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.r
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.r
    }

    /// Wraps a precomputed matrix; for tests and synthetic benchmarks that
    /// factorize hand-built feature matrices.
    pub fn from_matrix(r: DenseMatrix) -> RandomFeatureMatrix {
        RandomFeatureMatrix { r }
    }
}

/// Projects the attribute matrix onto its top-`d` singular directions and
/// returns the scaled coordinates `X' = Gamma * diag(Sigma)`.
///
/// Pass-through (bitwise copy) when `d >= x.cols()`. When `d` exceeds the
/// number of available singular values (`x` has fewer rows than `d`), the
/// output keeps all `min(rows, cols)` directions instead; downstream code
/// only consumes pairwise dot products, which that projection preserves
/// exactly.
pub fn reduce_attribute_dim(x: &DenseMatrix, d: usize, seed: RandomSeed) -> Result<DenseMatrix> {
    assert!(d >= 1, "reduce_attribute_dim requires d >= 1");
    if d >= x.cols() {
        return Ok(x.clone());
    }
    let k = d.min(x.rows());
    let svd = randomized_truncated_svd(x, k, 10, 2, seed)?;
    let mut out = svd.u;
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v *= svd.singular_values[j];
        }
    }
    Ok(out)
}

fn smoothed_impl(
    l: &crate::linalg::SparseMatrix,
    x: &DenseMatrix,
    alpha: f64,
    gamma: usize,
    threads: usize,
) -> Result<FeatureMatrix> {
    assert!(
        (0.0..=1.0).contains(&alpha),
        "smoothing coefficient alpha must be in [0, 1]"
    );
    if l.rows() != x.rows() {
        return Err(Error::ShapeMismatch {
            op: "compute_smoothed_features",
            left: (l.rows(), l.cols()),
            right: (x.rows(), x.cols()),
        });
    }
    #[cfg(feature = "std")]
    let mul = |d: &DenseMatrix, transpose: bool| {
        crate::linalg::spmm_with_threads(l, d, transpose, threads)
    };
    #[cfg(not(feature = "std"))]
    let mul = |d: &DenseMatrix, transpose: bool| {
        let _ = threads;
        crate::linalg::spmm(l, d, transpose)
    };

    let mut z = x.scaled(1.0 - alpha);
    if alpha > 0.0 {
        for _ in 0..gamma {
            let lt_z = mul(&z, true)?;
            let l_lt_z = mul(&lt_z, false)?;
            let mut next = x.scaled(1.0 - alpha);
            next.add_scaled(&l_lt_z, alpha);
            z = next;
        }
    }
    Ok(FeatureMatrix {
        zhat: row_l2_normalize(&z),
        raw: z,
    })
}

/// Smooths attributes over the normalized adjacency and row-normalizes.
///
/// Evaluates the truncated series
/// `Z = (1 - alpha) * sum_{r=0}^{gamma} alpha^r (L L^T)^r X`
/// by the recursion `Z <- (1 - alpha) X + alpha * L (L^T Z)` starting from
/// `Z = (1 - alpha) X`. The product is always associated as `L * (L^T Z)`;
/// the `n x n` matrix `L L^T` is never formed. Only `alpha` and `gamma`
/// are read from the config here; `reduced_dim` and the seed drive
/// [`reduce_attribute_dim`] and [`build_random_feature_map`].
pub fn compute_smoothed_features(
    l: &crate::linalg::SparseMatrix,
    x: &DenseMatrix,
    cfg: &EmbedConfig,
) -> Result<FeatureMatrix> {
    smoothed_impl(l, x, cfg.alpha, cfg.gamma, 1)
}

/// [`compute_smoothed_features`] with a kernel thread budget. Results are
/// bitwise identical for every thread count.
#[cfg(feature = "std")]
pub fn compute_smoothed_features_with_threads(
    l: &crate::linalg::SparseMatrix,
    x: &DenseMatrix,
    cfg: &EmbedConfig,
    threads: usize,
) -> Result<FeatureMatrix> {
    smoothed_impl(l, x, cfg.alpha, cfg.gamma, threads.max(1))
}

/// Builds the `n x 2d` random feature matrix R from normalized features.
///
/// With `Q` Haar-orthogonal, `Z0 = sqrt(d) * zhat * Q^T`, and
/// `R' = sqrt(e/d) * (sin(Z0) || cos(Z0))` entrywise, each row is scaled as
/// `R[i] = R'[i] / sqrt(max(R'[i] . r, 1e-12))` where `r` is the column-sum
/// vector of `R'`. The floor guards against a finite random sample driving
/// the (positive in expectation) denominator nonpositive.
pub fn build_random_feature_map(zhat: &FeatureMatrix, seed: RandomSeed) -> RandomFeatureMatrix {
    let z = zhat.zhat();
    let n = z.rows();
    let d = z.cols();
    if d == 0 {
        return RandomFeatureMatrix {
            r: DenseMatrix::zeros(n, 0),
        };
    }
    let q = haar_orthogonal(d, seed);
    let mut z0 = z.mul_transpose(&q);
    z0.scale_in_place(math::sqrt(d as f64));

    let scale = math::sqrt(E / d as f64);
    let mut rp = DenseMatrix::zeros(n, 2 * d);
    for i in 0..n {
        for j in 0..d {
            let v = z0.get(i, j);
            rp.set(i, j, scale * math::sin(v));
            rp.set(i, d + j, scale * math::cos(v));
        }
    }

    let r_sum: Vec<f64> = rp.col_sums();
    let mut r = rp.clone();
    for i in 0..n {
        let row = rp.row(i);
        let mut dot = 0.0;
        for (a, b) in row.iter().zip(&r_sum) {
            dot += a * b;
        }
        let inv = 1.0 / math::sqrt(dot.max(1e-12));
        for v in r.row_mut(i) {
            *v *= inv;
        }
    }
    RandomFeatureMatrix { r }
}
