//! Phase 3: rounding the nonnegative factor into a normalized cluster
//! indicator by alternating row assignment and rotation refitting.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::DenseMatrix;
use crate::math;
use crate::metrics::ClusterAssignment;

/// Normalized cluster indicator: one nonzero per row, and every nonempty
/// column scaled to unit L2 norm (so the nonzero value in column `l` is
/// `1/sqrt(|C_l|)`). Carries the derived label vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NciMatrix {
    y: DenseMatrix,
    labels: ClusterAssignment,
}

impl NciMatrix {
    pub fn y(&self) -> &DenseMatrix {
        &self.y
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn rows(&self) -> usize {
        self.y.rows()
    }

    pub fn k(&self) -> usize {
        self.y.cols()
    }

    /// Builds the indicator for a given label vector; labels must be below
    /// `k`. Useful for oracles and tests that start from a partition.
    pub fn from_labels(labels: &[usize], k: usize) -> NciMatrix {
        let mut raw = DenseMatrix::zeros(labels.len(), k);
        for (i, &l) in labels.iter().enumerate() {
            assert!(l < k, "label {} out of range for k={}", l, k);
            raw.set(i, l, 1.0);
        }
        normalize_columns(&raw)
    }
}

/// The `k x k` rotation aligning the factor with the indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix {
    phi: DenseMatrix,
}

impl RotationMatrix {
    pub fn identity(k: usize) -> RotationMatrix {
        RotationMatrix {
            phi: DenseMatrix::identity(k),
        }
    }

    pub fn phi(&self) -> &DenseMatrix {
        &self.phi
    }
}

/// Assigns each row of `upsilon` to `argmax_l upsilon[i] . phi[:,l]` and
/// returns the one-hot indicator. Ties break toward the smallest index.
pub fn assign_rows(upsilon: &DenseMatrix, phi: &RotationMatrix) -> DenseMatrix {
    assert_eq!(
        upsilon.cols(),
        phi.phi().rows(),
        "assign_rows shape mismatch"
    );
    let scores = upsilon.matmul(phi.phi());
    let mut raw = DenseMatrix::zeros(scores.rows(), scores.cols());
    for i in 0..scores.rows() {
        let row = scores.row(i);
        let mut best = 0usize;
        for (l, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = l;
            }
        }
        raw.set(i, best, 1.0);
    }
    raw
}

/// Scales each nonempty column of a one-hot indicator to unit L2 norm;
/// empty (all-zero) columns stay zero.
pub fn normalize_columns(raw: &DenseMatrix) -> NciMatrix {
    let n = raw.rows();
    let k = raw.cols();
    let mut labels = Vec::with_capacity(n);
    let mut counts = vec![0usize; k];
    for i in 0..n {
        let row = raw.row(i);
        let mut hit = None;
        for (l, &v) in row.iter().enumerate() {
            if v != 0.0 {
                debug_assert!(hit.is_none(), "row {} has multiple nonzeros", i);
                debug_assert!(v == 1.0, "row {} entry is {}, expected 1", i, v);
                hit = Some(l);
            }
        }
        let l = hit.expect("normalize_columns requires one-hot rows");
        labels.push(l);
        counts[l] += 1;
    }
    let mut y = DenseMatrix::zeros(n, k);
    for (i, &l) in labels.iter().enumerate() {
        y.set(i, l, 1.0 / math::sqrt(counts[l] as f64));
    }
    NciMatrix { y, labels }
}

/// Refits the rotation for a fixed indicator: `phi = upsilon^T y`.
pub fn update_rotation(upsilon: &DenseMatrix, y: &NciMatrix) -> RotationMatrix {
    assert_eq!(upsilon.rows(), y.rows(), "update_rotation shape mismatch");
    RotationMatrix {
        phi: upsilon.transpose_mul(y.y()),
    }
}

/// Runs up to `t_g` rounds of assign / normalize / refit starting from the
/// identity rotation, recording the indicator after every round. Stops
/// early once the label vector repeats between consecutive rounds (the
/// iteration has reached a fixpoint). The last entry is the final result.
pub fn generate_nci_trace(upsilon: &DenseMatrix, t_g: usize) -> Vec<NciMatrix> {
    assert!(t_g >= 1, "generate_nci requires t_g >= 1");
    let mut phi = RotationMatrix::identity(upsilon.cols());
    let mut trace: Vec<NciMatrix> = Vec::new();
    for _ in 0..t_g {
        let raw = assign_rows(upsilon, &phi);
        let nci = normalize_columns(&raw);
        let done = trace
            .last()
            .map(|prev| prev.labels() == nci.labels())
            .unwrap_or(false);
        if done {
            break;
        }
        phi = update_rotation(upsilon, &nci);
        trace.push(nci);
    }
    trace
}

/// Final normalized cluster indicator after at most `t_g` refinement
/// rounds (see [`generate_nci_trace`]).
pub fn generate_nci(upsilon: &DenseMatrix, t_g: usize) -> NciMatrix {
    generate_nci_trace(upsilon, t_g)
        .pop()
        .expect("t_g >= 1 always yields at least one iterate")
}

/// Label vector of the indicator (row `i` maps to the column of its
/// nonzero entry).
pub fn extract_labels(y: &NciMatrix) -> ClusterAssignment {
    y.labels.clone()
}
