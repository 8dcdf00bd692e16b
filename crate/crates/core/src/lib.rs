//! Pairwise PageRank ordering from two-hop walk statistics.
//!
//! The crate decides the PageRank order of a node pair in O(1) from
//! precomputed sparse data (`A = G - I` and `B = A^2` in factored form),
//! extracts top-k lists in O(kn) by tournament pruning, and ships a
//! desk-scale spectral laboratory that explains *why* the O(1) verdict is
//! usually right: the angle between two eigenvalue-derived vectors
//! concentrates near zero for common graph ensembles.
//!
//! Organization:
//!
//! - [`graph`]: directed weighted graphs in compressed sparse form, plus
//!   seeded random-graph generators (Erdős–Rényi, preferential attachment,
//!   small world).
//! - [`googlemat`]: the Google matrix held implicitly; O(1) access to
//!   entries, entry differences, and row sums of `A` and `B`.
//! - [`comparator`]: the O(1) pairwise verdict (sign-mirror function),
//!   higher-order and multi-pair variants.
//! - [`spectral`]: dense eigendecomposition in block-real form, the matrix
//!   exponential curve and its derivative identities, theta-angle machinery.
//! - [`topk`]: subgroup ranking and the iterative top-k extractor.
//! - [`oracle`]: power-method PageRank ground truth, pairwise correct-rate
//!   and top-k precision metrics.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature
//! (default) only toggles conveniences and `std::error::Error` integration
//! in dependencies. File formats, IO, and the CLI live in the companion
//! `tworank` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod comparator;
pub mod dense;
pub mod error;
pub mod gen;
pub mod googlemat;
pub mod graph;
pub mod oracle;
pub mod sparse;
pub mod spectral;
pub mod topk;

pub use error::Error;
pub use googlemat::{GoogleParams, RankContext};
pub use graph::Graph;

/// Crate version string embedded in reports and file headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
