//! Brute-force dense reference implementations for tests and acceptance
//! runs.
//!
//! Everything here trades speed for obviousness: plain textbook loops over
//! dense matrices, no sparsity, no randomization, and no code shared with
//! the pipeline kernels being validated. Inputs are capped to sizes where
//! full enumeration or dense powers stay under a second.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::DenseMatrix;
use crate::math;
use crate::metrics::ClusterAssignment;
use crate::rounding::NciMatrix;

/// Naive `a * b`.
fn omul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = DenseMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = 0.0;
            for l in 0..a.cols() {
                acc += a.get(i, l) * b.get(l, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Naive `a * b^T`.
fn omul_abt(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.cols());
    let mut out = DenseMatrix::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            let mut acc = 0.0;
            for l in 0..a.cols() {
                acc += a.get(i, l) * b.get(j, l);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Naive `a^T * b`.
fn omul_atb(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.rows(), b.rows());
    let mut out = DenseMatrix::zeros(a.cols(), b.cols());
    for i in 0..a.cols() {
        for j in 0..b.cols() {
            let mut acc = 0.0;
            for l in 0..a.rows() {
                acc += a.get(l, i) * b.get(l, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

fn frob_sq(a: &DenseMatrix) -> f64 {
    let mut acc = 0.0;
    for &v in a.data() {
        acc += v * v;
    }
    acc
}

/// Dense power-series evaluation of the smoothed features:
/// `(1 - alpha) * sum_{r=0}^{gamma_large} alpha^r (L L^T)^r X`.
///
/// Reference for the sparse recursion; `n_u <= 500`.
pub fn exact_features(
    l_dense: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
    gamma_large: usize,
) -> DenseMatrix {
    assert!(l_dense.rows() <= 500, "oracle capped at n_u <= 500");
    assert_eq!(l_dense.rows(), x.rows());
    assert!((0.0..=1.0).contains(&alpha));
    let m = omul_abt(l_dense, l_dense); // n x n
    let mut acc = x.clone();
    let mut term = x.clone();
    for _ in 1..=gamma_large {
        term = omul(&m, &term);
        term.scale_in_place(alpha);
        acc.add_scaled(&term, 1.0);
    }
    acc.scale_in_place(1.0 - alpha);
    acc
}

/// Exact multi-scale attribute affinity matrix:
/// `S[i,j] = e^{z_i . z_j} / (sqrt(sum_l e^{z_i . z_l}) * sqrt(sum_l e^{z_j . z_l}))`.
///
/// Dense and quadratic; `n_u <= 2000`.
pub fn exact_msa_matrix(zhat: &DenseMatrix) -> DenseMatrix {
    let n = zhat.rows();
    assert!(n <= 2000, "oracle capped at n_u <= 2000");
    let gram = omul_abt(zhat, zhat);
    let mut kexp = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            kexp.set(i, j, math::exp(gram.get(i, j)));
        }
    }
    let mut row_sums = vec![0.0f64; n];
    for (i, sum) in row_sums.iter_mut().enumerate() {
        for j in 0..n {
            *sum += kexp.get(i, j);
        }
    }
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = kexp.get(i, j) / math::sqrt(row_sums[i] * row_sums[j]);
            s.set(i, j, v);
        }
    }
    s
}

/// The cut-style clustering objective:
/// `sum_l (1/|C_l|) * sum_{i in C_l, j not in C_l} s[i,j]`.
///
/// Labels may leave trailing clusters unused; empty clusters contribute
/// nothing.
pub fn clustering_objective(s: &DenseMatrix, labels: &[usize]) -> f64 {
    let n = labels.len();
    assert_eq!(s.rows(), n);
    assert_eq!(s.cols(), n);
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut total = 0.0;
    for l in 0..k {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == l).collect();
        if members.is_empty() {
            continue;
        }
        let mut cross = 0.0;
        for &i in &members {
            for (j, &lj) in labels.iter().enumerate() {
                if lj != l {
                    cross += s.get(i, j);
                }
            }
        }
        total += cross / members.len() as f64;
    }
    total
}

fn trace_for_labels(s: &DenseMatrix, labels: &[usize]) -> f64 {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut within = vec![0.0f64; k];
    let mut sizes = vec![0usize; k];
    for (i, &li) in labels.iter().enumerate() {
        sizes[li] += 1;
        for (j, &lj) in labels.iter().enumerate() {
            if lj == li {
                within[li] += s.get(i, j);
            }
        }
    }
    let mut total = 0.0;
    for l in 0..k {
        if sizes[l] > 0 {
            total += within[l] / sizes[l] as f64;
        }
    }
    total
}

/// `Tr(Y^T S Y)`, the trace form of the clustering objective. For a
/// normalized cluster indicator this equals
/// `sum_l (1/|C_l|) * sum_{i,j in C_l} s[i,j]`.
pub fn trace_objective(s: &DenseMatrix, y: &NciMatrix) -> f64 {
    assert_eq!(s.rows(), y.rows());
    let sy = omul(s, y.y());
    let mut total = 0.0;
    for l in 0..y.k() {
        for i in 0..y.rows() {
            total += y.y().get(i, l) * sy.get(i, l);
        }
    }
    total
}

/// Visits every partition of `n` items into at most `max_blocks` nonempty
/// blocks, encoded as restricted-growth label vectors (block indices
/// appear in first-use order), in lexicographic order.
pub fn for_each_partition<F: FnMut(&[usize])>(n: usize, max_blocks: usize, mut f: F) {
    assert!(n >= 1 && max_blocks >= 1);
    fn rec<F: FnMut(&[usize])>(a: &mut Vec<usize>, i: usize, used: usize, cap: usize, f: &mut F) {
        if i == a.len() {
            f(a);
            return;
        }
        let top = (used + 1).min(cap);
        for b in 0..top {
            a[i] = b;
            rec(a, i + 1, used.max(b + 1), cap, f);
        }
    }
    let mut a = vec![0usize; n];
    rec(&mut a, 0, 0, max_blocks, &mut f);
}

/// Exhaustive best partition of `s` into at most `k` clusters.
///
/// Maximizes the trace form `Tr(Y^T S Y)`. The cut form of the objective
/// is degenerate over variable cluster counts (any single-cluster
/// partition zeroes it), while for matrices with constant row sums the
/// two orderings coincide exactly (`cut = c*k - trace`); the trace form
/// is therefore the quantity enumerated here. Ties keep the first
/// partition in enumeration order. Capped at `n <= 10`, `k <= 4`.
pub fn brute_force_best_partition(s: &DenseMatrix, k: usize) -> ClusterAssignment {
    let n = s.rows();
    assert_eq!(n, s.cols());
    assert!((1..=10).contains(&n), "brute force capped at n <= 10");
    assert!((1..=4).contains(&k), "brute force capped at k <= 4");
    let mut best: Option<(f64, ClusterAssignment)> = None;
    for_each_partition(n, k, |labels| {
        let val = trace_for_labels(s, labels);
        let better = match &best {
            None => true,
            Some((b, _)) => val > *b,
        };
        if better {
            best = Some((val, labels.to_vec()));
        }
    });
    best.expect("at least one partition exists").1
}

/// Left side of the rounding-error identity: `||R - Y (R^T Y)^T||_F^2`.
pub fn lemma2_lhs(r: &DenseMatrix, y: &DenseMatrix) -> f64 {
    let rty = omul_atb(r, y); // cols x k
    let mut recon = omul_abt(y, &rty); // n x cols
    recon.scale_in_place(-1.0);
    recon.add_scaled(r, 1.0);
    frob_sq(&recon)
}

/// Right side of the rounding-error identity:
/// `Tr(R R^T) - Tr(Y^T R R^T Y)`, computed through the explicit `n x n`
/// product. The sign of the second term follows the derivation steps (the
/// displayed final line of the source lemma has the sign flipped).
pub fn lemma2_rhs(r: &DenseMatrix, y: &DenseMatrix) -> f64 {
    let rrt = omul_abt(r, r); // n x n
    let mut tr = 0.0;
    for i in 0..rrt.rows() {
        tr += rrt.get(i, i);
    }
    let rrty = omul(&rrt, y);
    let ytrrty = omul_atb(y, &rrty);
    let mut tr2 = 0.0;
    for l in 0..ytrrty.rows() {
        tr2 += ytrrty.get(l, l);
    }
    tr - tr2
}

/// The rounding-phase monitoring quantity
/// `|Tr((Y Y^T - upsilon upsilon^T) R R^T)|`, evaluated densely.
pub fn lemma4_monitor(r: &DenseMatrix, upsilon: &DenseMatrix, y: &NciMatrix) -> f64 {
    let rrt = omul_abt(r, r);
    let trace_of = |m: &DenseMatrix| -> f64 {
        // Tr(M M^T RR^T) with M in {Y, upsilon}.
        let mmt = omul_abt(m, m);
        let prod = omul(&mmt, &rrt);
        let mut tr = 0.0;
        for i in 0..prod.rows() {
            tr += prod.get(i, i);
        }
        tr
    };
    math::fabs(trace_of(y.y()) - trace_of(upsilon))
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues descending and
/// eigenvector `j` in column `j`.
pub fn jacobi_eigen_symmetric(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "eigendecomposition needs a square matrix");
    let mut work = a.clone();
    // Symmetrize to wash out representation noise in the input.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (work.get(i, j) + work.get(j, i));
            work.set(i, j, m);
            work.set(j, i, m);
        }
    }
    let mut v = DenseMatrix::identity(n);

    let off_norm = |m: &DenseMatrix| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += m.get(i, j) * m.get(i, j);
                }
            }
        }
        math::sqrt(acc)
    };

    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&work) <= 1e-12 * (1.0 + work.frobenius_norm()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = work.get(p, q);
                if math::fabs(apq) < 1e-300 {
                    continue;
                }
                let theta = (work.get(q, q) - work.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for i in 0..n {
                    let aip = work.get(i, p);
                    let aiq = work.get(i, q);
                    work.set(i, p, c * aip - s * aiq);
                    work.set(i, q, s * aip + c * aiq);
                }
                for j in 0..n {
                    let apj = work.get(p, j);
                    let aqj = work.get(q, j);
                    work.set(p, j, c * apj - s * aqj);
                    work.set(q, j, s * apj + c * aqj);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * viq);
                    v.set(i, q, s * vip + c * viq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        work.get(y, y)
            .partial_cmp(&work.get(x, x))
            .unwrap()
            .then(x.cmp(&y))
    });
    let mut evals = Vec::with_capacity(n);
    let mut evecs = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        evals.push(work.get(src, src));
        for i in 0..n {
            evecs.set(i, dst, v.get(i, src));
        }
    }
    (evals, evecs)
}

/// Worst-case ratio of the dimension-reduction error bound.
///
/// For `X' = X V_d` (projection onto the exact top-`d` right singular
/// directions) and `Z, Z'` the infinite-series smoothed features of `X`
/// and `X'`, returns
/// `max_{i,j} |Z'_i . Z'_j - Z_i . Z_j| / (sigma_{d+1}^2 sqrt(D_u[i] D_u[j]) / (1 - alpha))`.
/// A sound bound keeps this at or below 1. Pairs with a zero bound and a
/// sub-1e-9 error (the exact-rank case) count as 0; a zero bound with a
/// real error returns infinity. Degrees must be strictly positive — the
/// bound does not cover isolated nodes.
pub fn lemma3_bound_check(
    x: &DenseMatrix,
    l_dense: &DenseMatrix,
    degrees_u: &[f64],
    alpha: f64,
    d: usize,
) -> f64 {
    let n = x.rows();
    let d_u = x.cols();
    assert_eq!(l_dense.rows(), n);
    assert_eq!(degrees_u.len(), n);
    assert!(
        degrees_u.iter().all(|&v| v > 0.0),
        "bound needs positive degrees"
    );
    assert!((0.0..1.0).contains(&alpha), "bound needs alpha in [0, 1)");
    assert!(d >= 1);

    let xtx = omul_atb(x, x);
    let (evals, evecs) = jacobi_eigen_symmetric(&xtx);
    let mut sigma2_next = if d < d_u { evals[d].max(0.0) } else { 0.0 };
    // Eigenvalues below float noise mean X has exact rank <= d; treat the
    // bound as exactly zero rather than dividing by representation dust.
    if sigma2_next < 1e-10 * evals.first().copied().unwrap_or(0.0).max(0.0) {
        sigma2_next = 0.0;
    }

    let d_eff = d.min(d_u);
    let mut v_d = DenseMatrix::zeros(d_u, d_eff);
    for j in 0..d_eff {
        for i in 0..d_u {
            v_d.set(i, j, evecs.get(i, j));
        }
    }
    let xp = omul(x, &v_d);

    let z = exact_features(l_dense, x, alpha, 200);
    let zp = exact_features(l_dense, &xp, alpha, 200);
    let g = omul_abt(&z, &z);
    let gp = omul_abt(&zp, &zp);

    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let num = math::fabs(gp.get(i, j) - g.get(i, j));
            let den = sigma2_next * math::sqrt(degrees_u[i] * degrees_u[j]) / (1.0 - alpha);
            let ratio = if den > 0.0 {
                num / den
            } else if num <= 1e-9 {
                0.0
            } else {
                f64::INFINITY
            };
            if ratio > worst {
                worst = ratio;
            }
        }
    }
    worst
}
