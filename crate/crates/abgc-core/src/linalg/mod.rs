//! Deterministic, seed-driven linear-algebra kernels shared by all phases.
//!
//! Everything here is plain row-major `f64` storage with explicitly ordered
//! accumulation loops: given identical inputs and seeds, every kernel
//! produces bitwise-identical output regardless of feature flags or thread
//! count.

mod dense;
mod qr;
mod sparse;
mod svd;

pub use dense::{row_l2_normalize, DenseMatrix};
pub use qr::{haar_orthogonal, householder_qr_thin};
#[cfg(feature = "std")]
pub use sparse::spmm_with_threads;
pub use sparse::{spmm, SparseMatrix};
pub use svd::randomized_truncated_svd;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 64-bit seed behind every randomized operation.
///
/// The generator is counter-based (ChaCha), so identical seeds replay
/// identical streams; [`RandomSeed::derive`] splits off statistically
/// independent sub-streams for distinct pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSeed(u64);

impl RandomSeed {
    pub fn new(seed: u64) -> Self {
        RandomSeed(seed)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Derives an independent sub-seed for the given stream label.
    pub fn derive(self, stream: u64) -> RandomSeed {
        // splitmix64 finalizer over seed + odd-multiplied stream label.
        let mut z = self
            .0
            .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        RandomSeed(z ^ (z >> 31))
    }

    /// Fresh generator positioned at the start of this seed's stream.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}
