//! Row-major dense matrix with explicitly ordered accumulation loops.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Dense row-major `f64` matrix.
///
/// Shape mismatches in the arithmetic methods are contract violations and
/// panic; fallible construction from untrusted input lives in the callers
/// that parse files.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "dense matrix data length does not match {}x{}",
            rows,
            cols
        );
        DenseMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// `self * b`, accumulated in ascending inner-index order.
    pub fn matmul(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols, b.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, b.rows, b.cols
        );
        let mut out = DenseMatrix::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            let arow = self.row(i);
            for (l, &a_il) in arow.iter().enumerate() {
                if a_il == 0.0 {
                    continue;
                }
                let brow = b.row(l);
                let orow = out.row_mut(i);
                for j in 0..brow.len() {
                    orow[j] += a_il * brow[j];
                }
            }
        }
        out
    }

    /// `self^T * b` without materializing the transpose.
    pub fn transpose_mul(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.rows, b.rows,
            "transpose_mul shape mismatch: {}x{} vs {}x{}",
            self.rows, self.cols, b.rows, b.cols
        );
        let mut out = DenseMatrix::zeros(self.cols, b.cols);
        for l in 0..self.rows {
            let arow = self.row(l);
            let brow = b.row(l);
            for (i, &a_li) in arow.iter().enumerate() {
                if a_li == 0.0 {
                    continue;
                }
                let orow = out.row_mut(i);
                for j in 0..brow.len() {
                    orow[j] += a_li * brow[j];
                }
            }
        }
        out
    }

    /// `self * b^T` without materializing the transpose.
    pub fn mul_transpose(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols, b.cols,
            "mul_transpose shape mismatch: {}x{} vs {}x{}",
            self.rows, self.cols, b.rows, b.cols
        );
        let mut out = DenseMatrix::zeros(self.rows, b.rows);
        for i in 0..self.rows {
            let arow = self.row(i);
            for j in 0..b.rows {
                let brow = b.row(j);
                let mut acc = 0.0;
                for l in 0..arow.len() {
                    acc += arow[l] * brow[l];
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn scale_in_place(&mut self, f: f64) {
        for v in &mut self.data {
            *v *= f;
        }
    }

    pub fn scaled(&self, f: f64) -> DenseMatrix {
        let mut out = self.clone();
        out.scale_in_place(f);
        out
    }

    /// `self += f * other`, elementwise.
    pub fn add_scaled(&mut self, other: &DenseMatrix, f: f64) {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add_scaled shape mismatch"
        );
        for (a, &b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += f * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for &v in &self.data {
            acc += v * v;
        }
        math::sqrt(acc)
    }

    /// Per-column sums, accumulated in ascending row order.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, &v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff shape mismatch"
        );
        let mut worst = 0.0f64;
        for (&a, &b) in self.data.iter().zip(other.data.iter()) {
            let d = math::fabs(a - b);
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Returns a copy with every nonzero row scaled to unit Euclidean norm.
///
/// All-zero rows are left as zeros rather than producing NaN. Rows whose
/// squared norm already sits within the rounding wobble of 1 are returned
/// unchanged; a freshly scaled row always lands inside that band (the
/// accumulated summation/division error is below 4(n+1) ulp), so the
/// function is exactly idempotent. Naive rescaling is not: it can oscillate
/// between two values one ulp apart.
pub fn row_l2_normalize(m: &DenseMatrix) -> DenseMatrix {
    let mut out = m.clone();
    let band = 16.0 * (out.cols() as f64 + 4.0) * f64::EPSILON;
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        let mut sq = 0.0;
        for &v in row.iter() {
            sq += v * v;
        }
        if sq == 0.0 || math::fabs(sq - 1.0) <= band {
            continue;
        }
        let norm = math::sqrt(sq);
        for v in row.iter_mut() {
            *v /= norm;
        }
    }
    out
}
