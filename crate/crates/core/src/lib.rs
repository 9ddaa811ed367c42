//! Exact isoperimetric profiles of rooted trees and the bounds that relate
//! them to subtree weights, tree depth and graph width parameters.
//!
//! * [`tree`]: rooted trees, file formats, generators, subtree weights.
//! * [`profile`]: edge/vertex profiles by subtree-merge DP, plus an exhaustive oracle.
//! * [`bounds`]: flux labelling, binomial counting bound, prefix upper bounds.
//! * [`report`]: per-tree reports, the verification suite and emitters.

pub mod bounds;
pub mod profile;
pub mod report;
pub mod tree;

pub use profile::{IsoProfile, Mode, ProfileConfig};
pub use tree::{RootedTree, TreeFormat, TreeKind, VertexSet, WeightTable};
