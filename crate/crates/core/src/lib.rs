//! Simulation toolkit for the LOCAL model of distributed graph computation
//! and locally checkable labeling (LCL) problems.
//!
//! The crate is organized around a small set of concrete objects:
//!
//! * [`graph`] — finite bounded-degree graphs with port numbering, the
//!   standard families (paths, cycles, grid tori, truncated regular trees),
//!   power graphs, and radius-`T` ball extraction with canonical re-indexing.
//! * [`problems`] — the LCL abstraction (finite alphabet plus a radius-1
//!   constraint) with the three classic instances: `k`-coloring, maximal
//!   independent set, and perfect matching via port labels.
//! * [`engine`] — executes view-based LOCAL algorithms, deterministic and
//!   randomized, and estimates failure rates over seeded trials.
//! * [`algorithms`] — greedy sequential coloring, log*-round `(d+1)`-coloring
//!   by iterated color reduction, randomized MIS, and the ID-swap adversary
//!   against claimed 2-coloring algorithms on paths.
//! * [`bridge`] — runs an algorithm configured for `n`-vertex inputs on a
//!   host graph of any size by assigning pseudo-identifiers obtained from a
//!   greedy coloring of a power graph.
//! * [`shift`] — bi-infinite 0/1 sequences, adaptive window rules on them,
//!   and the lifting of LOCAL algorithms to such rules.
//! * [`rotation`] — interval 3-coloring of the irrational rotation graph on
//!   `[0,1)` and orbit-walk checking.

pub mod algorithms;
pub mod bits;
pub mod bridge;
pub mod engine;
pub mod graph;
pub mod problems;
pub mod rng;
pub mod rotation;
pub mod shift;
pub mod util;

pub use bits::BitString;
pub use graph::{Graph, View};
pub use problems::{Labeling, LclProblem, Violation};
