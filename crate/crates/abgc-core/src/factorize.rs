//! Phase 2: greedy orthogonal NMF of the random feature matrix.

use alloc::vec::Vec;

use crate::embed::RandomFeatureMatrix;
use crate::linalg::{randomized_truncated_svd, DenseMatrix, RandomSeed};
use crate::math;
use crate::{Error, Result};

/// Phase-2 parameters.
#[derive(Debug, Clone, Copy)]
pub struct FactorizeConfig {
    /// Cluster count; the factorization needs at least 2.
    pub k: usize,
    /// Number of alternating update rounds.
    pub t_f: usize,
    /// Denominator guard added before every division.
    pub epsilon: f64,
    pub seed: RandomSeed,
}

impl FactorizeConfig {
    pub fn new(k: usize, t_f: usize, seed: RandomSeed) -> Self {
        FactorizeConfig {
            k,
            t_f,
            epsilon: 1e-12,
            seed,
        }
    }
}

/// Nonnegative factor pair `R ~ upsilon * h^T` with the recorded loss
/// trajectory (`loss_history[0]` is the initialization loss, one entry per
/// alternation round after that).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    /// `n x k`, nonnegative.
    pub upsilon: DenseMatrix,
    /// `2d x k`, nonnegative.
    pub h: DenseMatrix,
    /// `||R - upsilon * h^T||_F^2` per recorded step.
    pub loss_history: Vec<f64>,
}

/// `||R - upsilon * h^T||_F^2`, evaluated through the expansion
/// `||R||^2 - 2 <R^T upsilon, h> + <upsilon^T upsilon, h^T h>` so only
/// `k`-width products are formed; the `n x 2d` reconstruction never is.
/// Cancellation can make an exact-fit result a tiny negative number.
pub fn reconstruction_loss(r: &DenseMatrix, upsilon: &DenseMatrix, h: &DenseMatrix) -> f64 {
    let rf = r.frobenius_norm();
    let rtu = r.transpose_mul(upsilon); // 2d x k
    let mut cross = 0.0;
    for (a, b) in rtu.data().iter().zip(h.data()) {
        cross += a * b;
    }
    let utu = upsilon.transpose_mul(upsilon); // k x k
    let hth = h.transpose_mul(h); // k x k
    let mut gram = 0.0;
    for (a, b) in utu.data().iter().zip(hth.data()) {
        gram += a * b;
    }
    rf * rf - 2.0 * cross + gram
}

/// Seeds the factors from a rank-`k` truncated SVD of R.
///
/// Each singular pair is sign-aligned so the left vector's column sum is
/// nonnegative, then clamped at zero with a `1e-12` offset:
/// `upsilon = max(Gamma, 0) + eps`, `h = max(Psi * Sigma, 0) + eps`. The
/// clamp keeps the factors nonnegative while staying close to the
/// Eckart-Young optimum the SVD provides.
pub fn init_factors(r: &RandomFeatureMatrix, k: usize, seed: RandomSeed) -> Result<FactorPair> {
    const EPS: f64 = 1e-12;
    let m = r.matrix();
    let svd = randomized_truncated_svd(m, k, 10, 2, seed)?;

    let mut upsilon = svd.u;
    let mut h = svd.v;
    for l in 0..k {
        let mut col_sum = 0.0;
        for i in 0..upsilon.rows() {
            col_sum += upsilon.get(i, l);
        }
        let flip = if col_sum < 0.0 { -1.0 } else { 1.0 };
        for i in 0..upsilon.rows() {
            let v = (flip * upsilon.get(i, l)).max(0.0) + EPS;
            upsilon.set(i, l, v);
        }
        for j in 0..h.rows() {
            let v = (flip * h.get(j, l) * svd.singular_values[l]).max(0.0) + EPS;
            h.set(j, l, v);
        }
    }
    let loss = reconstruction_loss(m, &upsilon, &h);
    Ok(FactorPair {
        upsilon,
        h,
        loss_history: alloc::vec![loss],
    })
}

/// Multiplicative update of H:
/// `h'[j,l] = h[j,l] * max((R^T upsilon)[j,l], 0) / ((h (upsilon^T upsilon))[j,l] + eps)`.
///
/// The numerator clamp handles the sign-indefinite entries of R (sin/cos
/// features); the reconstruction `h upsilon^T` is never materialized.
pub fn update_h(
    r: &RandomFeatureMatrix,
    upsilon: &DenseMatrix,
    h: &DenseMatrix,
    epsilon: f64,
) -> DenseMatrix {
    assert!(epsilon > 0.0, "denominator guard must be positive");
    let num = r.matrix().transpose_mul(upsilon); // 2d x k
    let utu = upsilon.transpose_mul(upsilon); // k x k
    let den = h.matmul(&utu); // 2d x k
    let mut out = h.clone();
    let out_data = out.data_mut();
    for (idx, o) in out_data.iter_mut().enumerate() {
        let n = num.data()[idx].max(0.0);
        *o *= n / (den.data()[idx] + epsilon);
    }
    out
}

/// Multiplicative update of upsilon:
/// `u'[i,l] = u[i,l] * sqrt(w[i,l] / ((u (u^T w))[i,l] + eps))` with
/// `w = max(R h, 0)`.
///
/// The product is associated as `u * (u^T w)`; the `n x n` matrix
/// `u u^T` is never formed.
pub fn update_upsilon(
    r: &RandomFeatureMatrix,
    upsilon: &DenseMatrix,
    h: &DenseMatrix,
    epsilon: f64,
) -> DenseMatrix {
    assert!(epsilon > 0.0, "denominator guard must be positive");
    let mut w = r.matrix().matmul(h); // n x k
    for v in w.data_mut() {
        *v = v.max(0.0);
    }
    let utw = upsilon.transpose_mul(&w); // k x k
    let den = upsilon.matmul(&utw); // n x k
    let mut out = upsilon.clone();
    let out_data = out.data_mut();
    for (idx, o) in out_data.iter_mut().enumerate() {
        *o *= math::sqrt(w.data()[idx] / (den.data()[idx] + epsilon));
    }
    out
}

/// Runs the full phase: SVD seeding followed by `t_f` alternating rounds
/// (H first, then upsilon), recording the loss after every round.
pub fn run_onmf(r: &RandomFeatureMatrix, cfg: &FactorizeConfig) -> Result<FactorPair> {
    if cfg.k < 2 {
        return Err(Error::InvalidParam(alloc::format!(
            "orthogonal NMF needs k >= 2, got k={}",
            cfg.k
        )));
    }
    let mut fp = init_factors(r, cfg.k, cfg.seed)?;
    for _ in 0..cfg.t_f {
        fp.h = update_h(r, &fp.upsilon, &fp.h, cfg.epsilon);
        fp.upsilon = update_upsilon(r, &fp.upsilon, &fp.h, cfg.epsilon);
        fp.loss_history
            .push(reconstruction_loss(r.matrix(), &fp.upsilon, &fp.h));
    }
    Ok(fp)
}
