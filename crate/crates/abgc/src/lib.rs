//! File formats and pipeline orchestration on top of `abgc-core`.
//!
//! The core crate holds the numeric kernels; this crate adds everything
//! that touches the operating system: text formats for graphs, labels and
//! attributes, wall-clock phase timing, and the subcommand plumbing used
//! by the `abgc` binary.

pub mod formats;
pub mod pipeline;
