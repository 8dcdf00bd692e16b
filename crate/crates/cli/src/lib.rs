//! IO, file formats, and benchmark plumbing around `tworank-core`.
//!
//! - [`edgelist`]: the plain-text edge-list format (ingestion with id
//!   compaction, and a writer that round-trips).
//! - [`ctxfile`]: the binary context file format (magic `TWORANK1`,
//!   little-endian, checksummed).
//! - [`ensembles`]: dense random-matrix ensembles used by the theta
//!   benchmark tables.
//! - [`bench`]: table runners emitting CSV.
//! - [`report`]: JSON record types for single-query commands.

pub mod bench;
pub mod ctxfile;
pub mod edgelist;
pub mod ensembles;
pub mod report;
