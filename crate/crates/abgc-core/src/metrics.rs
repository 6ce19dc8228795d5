//! Ground-truth evaluation: Hungarian-mapped accuracy, NMI, and ARI.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::DenseMatrix;
use crate::math;
use crate::{Error, Result};

/// Predicted or ground-truth labels, one per target-side node.
pub type ClusterAssignment = Vec<usize>;

/// Cross-tabulation of two label vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    counts: Vec<u64>,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
    k_true: usize,
    k_pred: usize,
    n: u64,
}

impl ContingencyTable {
    pub fn from_labels(truth: &[usize], pred: &[usize]) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(Error::ShapeMismatch {
                op: "contingency table labels",
                left: (truth.len(), 1),
                right: (pred.len(), 1),
            });
        }
        if truth.is_empty() {
            return Err(Error::InvalidParam(alloc::format!(
                "metrics need at least one label, got {}",
                truth.len()
            )));
        }
        let k_true = truth.iter().max().unwrap() + 1;
        let k_pred = pred.iter().max().unwrap() + 1;
        let mut counts = vec![0u64; k_true * k_pred];
        for (&t, &p) in truth.iter().zip(pred) {
            counts[t * k_pred + p] += 1;
        }
        let mut row_marginals = vec![0u64; k_true];
        let mut col_marginals = vec![0u64; k_pred];
        for t in 0..k_true {
            for p in 0..k_pred {
                row_marginals[t] += counts[t * k_pred + p];
                col_marginals[p] += counts[t * k_pred + p];
            }
        }
        Ok(ContingencyTable {
            counts,
            row_marginals,
            col_marginals,
            k_true,
            k_pred,
            n: truth.len() as u64,
        })
    }

    pub fn count(&self, t: usize, p: usize) -> u64 {
        self.counts[t * self.k_pred + p]
    }

    pub fn k_true(&self) -> usize {
        self.k_true
    }

    pub fn k_pred(&self) -> usize {
        self.k_pred
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Exact minimum-cost assignment on a square cost matrix via the shortest
/// augmenting path method (Jonker-Volgenant potentials), O(k^3).
///
/// Returns `perm` with row `i` assigned to column `perm[i]`. Costs may be
/// negative; ties resolve deterministically.
pub fn hungarian_assignment(cost: &DenseMatrix) -> Vec<usize> {
    assert_eq!(cost.rows(), cost.cols(), "assignment needs a square matrix");
    assert!(cost.all_finite(), "assignment needs finite costs");
    let n = cost.rows();
    if n == 0 {
        return Vec::new();
    }
    // 1-indexed arrays; p[j] = row matched to column j (0 = none).
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    perm
}

/// Clustering accuracy: the fraction of nodes whose predicted label
/// matches the truth under the best cluster relabeling (maximum-weight
/// matching of the contingency table).
pub fn accuracy(truth: &[usize], pred: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(truth, pred)?;
    let m = table.k_true().max(table.k_pred());
    let mut cost = DenseMatrix::zeros(m, m);
    for t in 0..m {
        for p in 0..m {
            let c = if t < table.k_true() && p < table.k_pred() {
                table.count(t, p)
            } else {
                0
            };
            cost.set(t, p, -(c as f64));
        }
    }
    let perm = hungarian_assignment(&cost);
    let mut matched = 0u64;
    for (t, &p) in perm.iter().enumerate() {
        if t < table.k_true() && p < table.k_pred() {
            matched += table.count(t, p);
        }
    }
    Ok(matched as f64 / table.n() as f64)
}

/// Normalized mutual information with square-root normalization and
/// natural logarithms.
///
/// Degenerate cases: if both partitions carry zero entropy (both are a
/// single cluster, hence identical) the result is 1; if exactly one does,
/// the partitions differ and the result is 0.
pub fn nmi(truth: &[usize], pred: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(truth, pred)?;
    let n = table.n() as f64;
    let entropy = |marginals: &[u64]| -> f64 {
        let mut h = 0.0;
        for &c in marginals {
            if c > 0 {
                let p = c as f64 / n;
                h -= p * math::ln(p);
            }
        }
        h
    };
    let h_t = entropy(&table.row_marginals);
    let h_p = entropy(&table.col_marginals);
    if h_t == 0.0 && h_p == 0.0 {
        return Ok(1.0);
    }
    if h_t == 0.0 || h_p == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for t in 0..table.k_true() {
        for p in 0..table.k_pred() {
            let c = table.count(t, p);
            if c == 0 {
                continue;
            }
            let joint = c as f64 / n;
            let marg = (table.row_marginals[t] as f64 / n) * (table.col_marginals[p] as f64 / n);
            mi += joint * math::ln(joint / marg);
        }
    }
    Ok((mi / math::sqrt(h_t * h_p)).clamp(0.0, 1.0))
}

/// Adjusted Rand index.
///
/// The degenerate 0/0 case (both partitions trivial, hence identical) is
/// defined as 1.
pub fn ari(truth: &[usize], pred: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(truth, pred)?;
    let choose2 = |x: u64| -> f64 {
        let x = x as f64;
        x * (x - 1.0) / 2.0
    };
    let mut index = 0.0;
    for t in 0..table.k_true() {
        for p in 0..table.k_pred() {
            index += choose2(table.count(t, p));
        }
    }
    let a: f64 = table.row_marginals.iter().map(|&c| choose2(c)).sum();
    let b: f64 = table.col_marginals.iter().map(|&c| choose2(c)).sum();
    let total = choose2(table.n());
    let expected = a * b / total;
    let max = 0.5 * (a + b);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
