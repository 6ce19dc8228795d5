//! Compressed sparse row storage and sparse-dense products.

use alloc::vec;
use alloc::vec::Vec;

use super::dense::DenseMatrix;
use crate::{Error, Result};

/// CSR matrix; column indices are strictly increasing within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets.
    ///
    /// Triplets are sorted, duplicates are summed, and exact zeros are
    /// dropped. Out-of-range indices are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= rows {
                return Err(Error::IndexOutOfRange {
                    what: "sparse row index",
                    index: r,
                    bound: rows,
                });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange {
                    what: "sparse column index",
                    index: c,
                    bound: cols,
                });
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|e| (e.0, e.1));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut it = sorted.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if r2 == r && c2 == c {
                    v += v2;
                    it.next();
                } else {
                    break;
                }
            }
            if v != 0.0 {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i` in ascending column order.
    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.iter_row(i) {
                out.set(i, j, v);
            }
        }
        out
    }

    fn row_span(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }
}

fn check_spmm_shapes(s: &SparseMatrix, d: &DenseMatrix, transpose_sparse: bool) -> Result<usize> {
    let (inner, out_rows) = if transpose_sparse {
        (s.rows, s.cols)
    } else {
        (s.cols, s.rows)
    };
    if inner != d.rows() {
        return Err(Error::ShapeMismatch {
            op: "spmm",
            left: if transpose_sparse {
                (s.cols, s.rows)
            } else {
                (s.rows, s.cols)
            },
            right: (d.rows(), d.cols()),
        });
    }
    Ok(out_rows)
}

/// Sparse-dense product `s * d`, or `s^T * d` when `transpose_sparse` is
/// set, without materializing the transpose.
///
/// Accumulation order is fixed (sparse rows ascending, columns ascending
/// within a row), so results are bitwise reproducible.
pub fn spmm(s: &SparseMatrix, d: &DenseMatrix, transpose_sparse: bool) -> Result<DenseMatrix> {
    let out_rows = check_spmm_shapes(s, d, transpose_sparse)?;
    let mut out = DenseMatrix::zeros(out_rows, d.cols());
    if transpose_sparse {
        for i in 0..s.rows {
            let drow = d.row(i);
            for (col, v) in s.iter_row(i) {
                let orow = out.row_mut(col);
                for j in 0..drow.len() {
                    orow[j] += v * drow[j];
                }
            }
        }
    } else {
        for i in 0..s.rows {
            let (idx, val) = s.row_span(i);
            let orow = out.row_mut(i);
            for (&col, &v) in idx.iter().zip(val) {
                let drow = d.row(col);
                for j in 0..drow.len() {
                    orow[j] += v * drow[j];
                }
            }
        }
    }
    Ok(out)
}

/// Multi-threaded [`spmm`] with identical (bitwise) results for any thread
/// count: the output rows are split into contiguous chunks and each chunk
/// is accumulated in the same order the sequential kernel uses.
#[cfg(feature = "std")]
pub fn spmm_with_threads(
    s: &SparseMatrix,
    d: &DenseMatrix,
    transpose_sparse: bool,
    threads: usize,
) -> Result<DenseMatrix> {
    let out_rows = check_spmm_shapes(s, d, transpose_sparse)?;
    let threads = threads.max(1).min(out_rows.max(1));
    if threads == 1 {
        return spmm(s, d, transpose_sparse);
    }
    let width = d.cols();
    let mut out = DenseMatrix::zeros(out_rows, width);

    // Even row split: the first `rem` chunks take one extra row.
    let base = out_rows / threads;
    let rem = out_rows % threads;
    let mut bounds = Vec::with_capacity(threads + 1);
    bounds.push(0usize);
    for t in 0..threads {
        bounds.push(bounds[t] + base + usize::from(t < rem));
    }

    let mut chunks: Vec<&mut [f64]> = Vec::with_capacity(threads);
    {
        let mut rest = out.data_mut();
        for t in 0..threads {
            let take = (bounds[t + 1] - bounds[t]) * width;
            let (head, tail) = rest.split_at_mut(take);
            chunks.push(head);
            rest = tail;
        }
    }

    std::thread::scope(|scope| {
        for (t, chunk) in chunks.into_iter().enumerate() {
            let lo = bounds[t];
            let hi = bounds[t + 1];
            scope.spawn(move || {
                if transpose_sparse {
                    // Output rows are sparse columns; walk every sparse row
                    // and keep only entries whose column lands in [lo, hi).
                    for i in 0..s.rows {
                        let (idx, val) = s.row_span(i);
                        let start = idx.partition_point(|&c| c < lo);
                        let end = idx.partition_point(|&c| c < hi);
                        if start == end {
                            continue;
                        }
                        let drow = d.row(i);
                        for e in start..end {
                            let col = idx[e];
                            let orow = &mut chunk[(col - lo) * width..(col - lo + 1) * width];
                            for j in 0..width {
                                orow[j] += val[e] * drow[j];
                            }
                        }
                    }
                } else {
                    for i in lo..hi {
                        let (idx, val) = s.row_span(i);
                        let orow = &mut chunk[(i - lo) * width..(i - lo + 1) * width];
                        for (&col, &v) in idx.iter().zip(val) {
                            let drow = d.row(col);
                            for j in 0..width {
                                orow[j] += v * drow[j];
                            }
                        }
                    }
                }
            });
        }
    });
    Ok(out)
}
