//! Exact word metrics and horofunction computations for Diestel-Leader
//! graphs `DL_d(q)`.
//!
//! * [`treecoord`]: `(m, path)` coordinates on a single tree and the
//!   per-tree pair statistics `m(x, y)`, `l(x, y)`.
//! * [`dlgraph`]: vertices, adjacency, ball enumeration, literals and the
//!   named point families.
//! * [`metric`]: the min-over-permutations distance formula, a breadth-first
//!   oracle, and checkers for the distance-bound lemmas.
//! * [`horofn`]: horofunction limits, the closed form for `β`, m-profiles,
//!   the `f_σ(β_n, z)` table and probe sets.
//! * [`stars`]: finite certificates for star inclusion and exclusion.
//! * [`verify`]: the exhaustive and seeded verification suites.

pub mod dlgraph;
pub mod error;
pub mod horofn;
pub mod metric;
pub mod report;
pub mod stars;
pub mod treecoord;
pub mod verify;

pub use dlgraph::{Ball, DLParams, DLVertex, DiestelLeader, PointFamily};
pub use error::{Error, Result};
pub use report::VerificationReport;
pub use treecoord::{TreeParams, TreeVertex};
