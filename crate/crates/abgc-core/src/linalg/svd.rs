//! Randomized truncated SVD (Halko-Martinsson-Tropp sketch) with an exact
//! one-sided Jacobi solve for the small projected problem.

use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use super::dense::DenseMatrix;
use super::qr::householder_qr_thin;
use super::RandomSeed;
use crate::math;
use crate::{Error, Result};

/// Rank-`k` factorization `m ~ u * diag(singular_values) * v^T`.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    /// Left singular vectors, `rows x k`, orthonormal columns.
    pub u: DenseMatrix,
    /// Leading singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, `cols x k`.
    pub v: DenseMatrix,
}

/// Computes a rank-`k` truncated SVD of `m` with a Gaussian sketch of
/// `k + oversample` columns and `power_iters` re-orthonormalized power
/// iterations. The oversampling is clamped so the sketch never exceeds
/// `min(rows, cols)` columns.
///
/// Deterministic for a fixed seed; errors when `k` is outside
/// `1..=min(rows, cols)`.
pub fn randomized_truncated_svd(
    m: &DenseMatrix,
    k: usize,
    oversample: usize,
    power_iters: usize,
    seed: RandomSeed,
) -> Result<TruncatedSvd> {
    let min_dim = m.rows().min(m.cols());
    if k < 1 || k > min_dim {
        return Err(Error::InvalidParam(alloc::format!(
            "svd rank k={} must lie in 1..={} for a {}x{} matrix",
            k,
            min_dim,
            m.rows(),
            m.cols()
        )));
    }
    let sketch = k + oversample.min(min_dim - k);

    let mut rng = seed.rng();
    let mut omega_data = Vec::with_capacity(m.cols() * sketch);
    for _ in 0..m.cols() * sketch {
        omega_data.push(StandardNormal.sample(&mut rng));
    }
    let omega = DenseMatrix::from_vec(m.cols(), sketch, omega_data);

    let y = m.matmul(&omega);
    let (mut q, _) = householder_qr_thin(&y);
    for _ in 0..power_iters {
        let w = m.transpose_mul(&q);
        let (qw, _) = householder_qr_thin(&w);
        let y = m.matmul(&qw);
        let (qy, _) = householder_qr_thin(&y);
        q = qy;
    }

    // Project: B = Q^T m is sketch x cols; solve its SVD exactly.
    let b = q.transpose_mul(m);
    let (w, sigma, v_small) = jacobi_svd_tall(&b.transpose());

    // b^T = w sigma v_small^T, so b = v_small sigma w^T: the left factor of
    // b is v_small and the right factor is w.
    let mut u_small = DenseMatrix::zeros(sketch, k);
    let mut v = DenseMatrix::zeros(m.cols(), k);
    let mut singular_values = Vec::with_capacity(k);
    for (j, &sv) in sigma.iter().take(k).enumerate() {
        singular_values.push(sv);
        for i in 0..sketch {
            u_small.set(i, j, v_small.get(i, j));
        }
        for i in 0..m.cols() {
            v.set(i, j, w.get(i, j));
        }
    }
    let u = q.matmul(&u_small);
    Ok(TruncatedSvd {
        u,
        singular_values,
        v,
    })
}

/// One-sided Jacobi SVD of a tall matrix `a` (`rows >= cols`).
///
/// Returns `(w, sigma, v)` with `a = w * diag(sigma) * v^T`, `sigma`
/// descending, `v` exactly orthogonal (an accumulated product of plane
/// rotations), and `w` columns orthonormal wherever `sigma > 0`.
fn jacobi_svd_tall(a: &DenseMatrix) -> (DenseMatrix, Vec<f64>, DenseMatrix) {
    let n = a.rows();
    let m = a.cols();
    assert!(n >= m, "jacobi_svd_tall requires rows >= cols");
    let mut work = a.clone();
    let mut v = DenseMatrix::identity(m);

    let col_dot = |w: &DenseMatrix, p: usize, q: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..w.rows() {
            acc += w.get(i, p) * w.get(i, q);
        }
        acc
    };

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let app = col_dot(&work, p, p);
                let aqq = col_dot(&work, q, q);
                let apq = col_dot(&work, p, q);
                if math::fabs(apq) <= 1e-30 + 1e-15 * math::sqrt(app * aqq) {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..n {
                    let wp = work.get(i, p);
                    let wq = work.get(i, q);
                    work.set(i, p, c * wp - s * wq);
                    work.set(i, q, s * wp + c * wq);
                }
                for i in 0..m {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = vec![0.0f64; m];
    for (j, s) in sigma.iter_mut().enumerate() {
        *s = math::sqrt(col_dot(&work, j, j));
    }
    // Stable descending order by singular value, ties kept in column order.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap().then(x.cmp(&y)));

    let mut w_sorted = DenseMatrix::zeros(n, m);
    let mut v_sorted = DenseMatrix::zeros(m, m);
    let mut sigma_sorted = vec![0.0f64; m];
    for (dst, &src) in order.iter().enumerate() {
        sigma_sorted[dst] = sigma[src];
        let inv = if sigma[src] > 0.0 {
            1.0 / sigma[src]
        } else {
            0.0
        };
        for i in 0..n {
            w_sorted.set(i, dst, work.get(i, src) * inv);
        }
        for i in 0..m {
            v_sorted.set(i, dst, v.get(i, src));
        }
    }
    (w_sorted, sigma_sorted, v_sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qr::assert_orthonormal_columns;

    fn arbitrary(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        let mut rng = RandomSeed::new(seed).rng();
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(StandardNormal.sample(&mut rng));
        }
        DenseMatrix::from_vec(rows, cols, data)
    }

    fn reconstruct(f: &TruncatedSvd) -> DenseMatrix {
        let mut scaled = f.u.clone();
        for i in 0..scaled.rows() {
            for j in 0..scaled.cols() {
                let v = scaled.get(i, j) * f.singular_values[j];
                scaled.set(i, j, v);
            }
        }
        scaled.mul_transpose(&f.v)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let f = randomized_truncated_svd(&DenseMatrix::identity(5), 5, 10, 2, RandomSeed::new(1))
            .unwrap();
        for &s in &f.singular_values {
            assert!((s - 1.0).abs() < 1e-10, "sigma = {}", s);
        }
        assert!(reconstruct(&f).max_abs_diff(&DenseMatrix::identity(5)) < 1e-10);
    }

    #[test]
    fn rank_one_is_recovered_exactly() {
        let a = [1.0, -2.0, 3.0, 0.5];
        let b = [2.0, 0.0, -1.0];
        let mut data = Vec::new();
        for &ai in &a {
            for &bj in &b {
                data.push(ai * bj);
            }
        }
        let m = DenseMatrix::from_vec(4, 3, data);
        let f = randomized_truncated_svd(&m, 1, 10, 2, RandomSeed::new(9)).unwrap();
        let na = (1.0f64 + 4.0 + 9.0 + 0.25).sqrt();
        let nb = (4.0f64 + 1.0).sqrt();
        assert!((f.singular_values[0] - na * nb).abs() < 1e-10);
        assert!(reconstruct(&f).max_abs_diff(&m) < 1e-10);
    }

    #[test]
    fn full_rank_reconstruction_is_exact() {
        for (rows, cols) in [(8, 5), (5, 8), (6, 6)] {
            let m = arbitrary(rows, cols, 11);
            let k = rows.min(cols);
            let f = randomized_truncated_svd(&m, k, 10, 2, RandomSeed::new(3)).unwrap();
            assert!(reconstruct(&f).max_abs_diff(&m) < 1e-9);
            assert_orthonormal_columns(&f.u, 1e-9);
            assert_orthonormal_columns(&f.v, 1e-9);
        }
    }

    #[test]
    fn truncation_is_near_optimal_on_decaying_spectrum() {
        // Build a matrix with known singular values 10, 5, 1, 0.1, ... and
        // check the rank-2 factorization captures the top two directions.
        let q1 = crate::linalg::haar_orthogonal(7, RandomSeed::new(21));
        let q2 = crate::linalg::haar_orthogonal(5, RandomSeed::new(22));
        let sig = [10.0, 5.0, 1.0, 0.1, 0.01];
        let mut core = DenseMatrix::zeros(7, 5);
        for (j, &s) in sig.iter().enumerate() {
            core.set(j, j, s);
        }
        let m = q1.matmul(&core).matmul(&q2.transpose());
        let f = randomized_truncated_svd(&m, 2, 10, 2, RandomSeed::new(4)).unwrap();
        assert!((f.singular_values[0] - 10.0).abs() < 1e-8);
        assert!((f.singular_values[1] - 5.0).abs() < 1e-8);
        let err = reconstruct(&f).max_abs_diff(&m);
        // The optimal rank-2 residual has spectral norm 1.
        assert!(err < 1.0 + 1e-8, "residual {}", err);
    }

    #[test]
    fn seeded_and_deterministic() {
        let m = arbitrary(9, 6, 5);
        let a = randomized_truncated_svd(&m, 3, 10, 2, RandomSeed::new(42)).unwrap();
        let b = randomized_truncated_svd(&m, 3, 10, 2, RandomSeed::new(42)).unwrap();
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        assert_eq!(a.singular_values, b.singular_values);
    }

    #[test]
    fn rejects_rank_out_of_range() {
        let m = DenseMatrix::zeros(4, 3);
        assert!(randomized_truncated_svd(&m, 0, 10, 2, RandomSeed::new(1)).is_err());
        assert!(randomized_truncated_svd(&m, 4, 10, 2, RandomSeed::new(1)).is_err());
    }
}
