//! Finite-window machinery for graph self-similarity and layered disjoint
//! minors: inflated copies, tree-decompositions and boughs, ray families and
//! their linkage structure, tribes, and the even/odd inductive construction
//! that extracts pairwise disjoint prefix copies.
//!
//! Infinite graphs enter as (oracle, root) generators; every end-dependent
//! notion is computed on an explicit finite window and reported together
//! with the radius used.

pub mod error;
pub mod flow;
pub mod graph;
pub mod minor;
pub mod rays;
pub mod td;

pub use error::{Error, Result};
pub use graph::{
    components_after_removal, is_separation, window, FiniteGraph, Generator, Separation, VSet,
    WindowedGraph,
};

/// Maximum family of pairwise vertex-disjoint A–B paths avoiding
/// `forbidden`. A vertex in A ∩ B counts as a length-0 path; the family size
/// equals the A–B Menger number of g − forbidden.
pub fn vertex_disjoint_paths(
    g: &FiniteGraph,
    a: &VSet,
    b: &VSet,
    forbidden: &VSet,
) -> Vec<Vec<usize>> {
    flow::disjoint_paths(g, a, b, forbidden)
}
