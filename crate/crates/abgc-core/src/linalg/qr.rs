//! Householder QR and Haar-distributed orthogonal matrices.

use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use super::dense::DenseMatrix;
use super::RandomSeed;
use crate::math;

/// Thin QR factorization of a tall matrix (`rows >= cols`) via Householder
/// reflections. Returns `(q, r)` with `q` of shape `rows x cols`,
/// orthonormal columns, and `r` upper triangular `cols x cols`.
pub fn householder_qr_thin(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let m = a.cols();
    assert!(n >= m, "thin QR requires rows >= cols, got {}x{}", n, m);

    // Work in place: below-diagonal entries of `work` hold the reflector
    // vectors, the rest holds R.
    let mut work = a.clone();
    let mut betas = vec![0.0f64; m];
    let mut diags = vec![0.0f64; m];

    for j in 0..m {
        let mut norm_sq = 0.0;
        for i in j..n {
            let v = work.get(i, j);
            norm_sq += v * v;
        }
        let norm = math::sqrt(norm_sq);
        if norm == 0.0 {
            betas[j] = 0.0;
            diags[j] = 0.0;
            continue;
        }
        let x0 = work.get(j, j);
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let v0 = x0 - alpha;
        work.set(j, j, v0);
        // v^T v = -2 * alpha * v0 for this choice of alpha.
        betas[j] = 2.0 / (-2.0 * alpha * v0);
        diags[j] = alpha;

        for c in (j + 1)..m {
            let mut dot = 0.0;
            for i in j..n {
                dot += work.get(i, j) * work.get(i, c);
            }
            let s = betas[j] * dot;
            for i in j..n {
                let v = work.get(i, c) - s * work.get(i, j);
                work.set(i, c, v);
            }
        }
    }

    let mut r = DenseMatrix::zeros(m, m);
    for (j, &dj) in diags.iter().enumerate() {
        r.set(j, j, dj);
        for c in (j + 1)..m {
            r.set(j, c, work.get(j, c));
        }
    }

    // Accumulate the thin Q by applying reflectors to the first m columns
    // of the identity, last reflector first.
    let mut q = DenseMatrix::zeros(n, m);
    for j in 0..m {
        q.set(j, j, 1.0);
    }
    for j in (0..m).rev() {
        if betas[j] == 0.0 {
            continue;
        }
        for c in 0..m {
            let mut dot = 0.0;
            for i in j..n {
                dot += work.get(i, j) * q.get(i, c);
            }
            let s = betas[j] * dot;
            for i in j..n {
                let v = q.get(i, c) - s * work.get(i, j);
                q.set(i, c, v);
            }
        }
    }
    (q, r)
}

/// Haar-distributed random orthogonal matrix of the given dimension.
///
/// A Gaussian matrix is QR-factorized and each Q column is multiplied by
/// the sign of the matching R diagonal (zero counts as positive), which
/// makes the factorization canonical and the result exactly Haar.
pub fn haar_orthogonal(dim: usize, seed: RandomSeed) -> DenseMatrix {
    assert!(dim >= 1, "haar_orthogonal requires dim >= 1");
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        data.push(StandardNormal.sample(&mut rng));
    }
    let g = DenseMatrix::from_vec(dim, dim, data);
    let (mut q, r) = householder_qr_thin(&g);
    for j in 0..dim {
        if r.get(j, j) < 0.0 {
            for i in 0..dim {
                let v = -q.get(i, j);
                q.set(i, j, v);
            }
        }
    }
    q
}

#[cfg(test)]
pub(crate) fn assert_orthonormal_columns(m: &DenseMatrix, tol: f64) {
    let gram = m.transpose_mul(m);
    let eye = DenseMatrix::identity(m.cols());
    assert!(
        gram.max_abs_diff(&eye) < tol,
        "columns are not orthonormal within {}",
        tol
    );
}
