//! Core library for clustering the target side of an attributed bipartite
//! graph into `k` groups.
//!
//! The pipeline runs in three phases:
//!
//! 1. [`embed`] — multi-hop attribute smoothing over the normalized
//!    adjacency, followed by a random-feature map whose row products
//!    estimate the multi-scale attribute affinity (MSA) between nodes;
//! 2. [`factorize`] — greedy orthogonal NMF of the random-feature matrix,
//!    seeded by a randomized truncated SVD;
//! 3. [`rounding`] — alternating refinement of a normalized
//!    cluster-indicator matrix from the relaxed factor.
//!
//! [`oracle`] holds independent dense reference implementations used by the
//! test suites, [`metrics`] the label-based evaluation measures (ACC, NMI,
//! ARI), and [`datagen`] synthetic planted-partition graphs plus the small
//! golden fixture used across the tests.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only adds `std::error::Error` impls and threaded kernels.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod datagen;
pub mod embed;
mod error;
pub mod factorize;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod rounding;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// `f64` math routed through `libm` so results are bitwise identical with
/// and without the `std` feature.
pub(crate) mod math {
    pub(crate) use libm::{cos, exp, fabs, log as ln, sin, sqrt};
}
