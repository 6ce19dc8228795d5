//! Attributed bipartite graph ingestion and degree-normalized adjacency.

use alloc::vec::Vec;

use crate::linalg::{DenseMatrix, SparseMatrix};
use crate::math;
use crate::{Error, Result};

/// Weighted node degrees for one side of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVector(Vec<f64>);

impl DegreeVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elementwise `1/sqrt(d)`; isolated nodes (degree zero) map to zero so
    /// they contribute nothing to the normalized adjacency.
    pub fn inv_sqrt(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / math::sqrt(d) } else { 0.0 })
            .collect()
    }
}

/// Undirected weighted bipartite graph between a `U` side and a `V` side,
/// with a dense attribute matrix on `U` and optionally on `V`.
///
/// Edges are canonicalized at construction: duplicates are merged by
/// summing weights, zero-weight edges are dropped, and the list is sorted
/// by `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    n_u: usize,
    n_v: usize,
    edges: Vec<(usize, usize, f64)>,
    attrs_u: DenseMatrix,
    attrs_v: Option<DenseMatrix>,
}

impl BipartiteGraph {
    pub fn new(
        n_u: usize,
        n_v: usize,
        edges: Vec<(usize, usize, f64)>,
        attrs_u: DenseMatrix,
        attrs_v: Option<DenseMatrix>,
    ) -> Result<Self> {
        if attrs_u.rows() != n_u {
            return Err(Error::ShapeMismatch {
                op: "attrs_u rows vs n_u",
                left: (attrs_u.rows(), attrs_u.cols()),
                right: (n_u, 0),
            });
        }
        if let Some(av) = &attrs_v {
            if av.rows() != n_v {
                return Err(Error::ShapeMismatch {
                    op: "attrs_v rows vs n_v",
                    left: (av.rows(), av.cols()),
                    right: (n_v, 0),
                });
            }
        }
        for &(u, v, w) in &edges {
            if u >= n_u {
                return Err(Error::IndexOutOfRange {
                    what: "edge u endpoint",
                    index: u,
                    bound: n_u,
                });
            }
            if v >= n_v {
                return Err(Error::IndexOutOfRange {
                    what: "edge v endpoint",
                    index: v,
                    bound: n_v,
                });
            }
            if w < 0.0 || w.is_nan() {
                return Err(Error::NegativeWeight { u, v, weight: w });
            }
        }
        let mut sorted = edges;
        sorted.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(sorted.len());
        for (u, v, w) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += w,
                _ => merged.push((u, v, w)),
            }
        }
        merged.retain(|&(_, _, w)| w > 0.0);
        Ok(BipartiteGraph {
            n_u,
            n_v,
            edges: merged,
            attrs_u,
            attrs_v,
        })
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    /// Canonicalized edge list, sorted by `(u, v)` with positive weights.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn attrs_u(&self) -> &DenseMatrix {
        &self.attrs_u
    }

    pub fn attrs_v(&self) -> Option<&DenseMatrix> {
        self.attrs_v.as_ref()
    }

    /// Exchanges the two sides so the former `V` becomes the clustering
    /// target. Errors when `V` carries no attributes, since the target
    /// side must be attributed.
    pub fn swap_sides(self) -> Result<BipartiteGraph> {
        let attrs_v = self.attrs_v.ok_or_else(|| {
            Error::InvalidParam(alloc::format!(
                "cannot target the V side: no attributes were provided for its {} nodes",
                self.n_v
            ))
        })?;
        let edges = self.edges.into_iter().map(|(u, v, w)| (v, u, w)).collect();
        BipartiteGraph::new(self.n_v, self.n_u, edges, attrs_v, Some(self.attrs_u))
    }

    /// Weighted degree vectors `(deg_u, deg_v)`.
    pub fn compute_degrees(&self) -> (DegreeVector, DegreeVector) {
        let mut du = alloc::vec![0.0f64; self.n_u];
        let mut dv = alloc::vec![0.0f64; self.n_v];
        for &(u, v, w) in &self.edges {
            du[u] += w;
            dv[v] += w;
        }
        (DegreeVector(du), DegreeVector(dv))
    }

    /// Degree-normalized adjacency `L = D_u^{-1/2} B D_v^{-1/2}` in CSR
    /// form (`n_u x n_v`). Rows and columns of isolated nodes are zero.
    pub fn build_normalized_adjacency(&self) -> SparseMatrix {
        let (du, dv) = self.compute_degrees();
        let su = du.inv_sqrt();
        let sv = dv.inv_sqrt();
        let triplets: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|&(u, v, w)| (u, v, su[u] * w * sv[v]))
            .collect();
        // Canonical edges are unique and in range, so this cannot fail.
        SparseMatrix::from_triplets(self.n_u, self.n_v, &triplets)
            .expect("canonical edges are always valid triplets")
    }
}
