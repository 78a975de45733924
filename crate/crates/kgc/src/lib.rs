//! Finite higher-rank graphs (k-graphs), product systems of
//! finite-dimensional c₀(V)-correspondences, and graph-realizability.
//!
//! The library is organized around five pieces:
//!
//! - [`graphs`]: directed graphs over a fixed finite vertex set,
//!   fibred products, and k-graph presentations given by skeleton
//!   graphs plus commuting-square bijections.
//! - [`correspondences`]: V×V-graded complex vector spaces modeling
//!   finite-dimensional c₀(V)-correspondences, balanced tensor
//!   products, and the block-wise morphism algebra.
//! - [`product_systems`]: skeletons (Y, T) of product systems over
//!   ℕᵏ, hexagon verification, structure maps, the ω invariant,
//!   isomorphism search, and realizability decisions.
//! - [`imprimitivity`]: detection of imprimitivity bimodules over a
//!   finite discrete vertex set and their realization as graph
//!   correspondences (V, V, h, id).
//! - [`formats`]: the line-oriented text formats consumed and emitted
//!   by the `kgc` command-line tool.

pub mod cli;
pub mod correspondences;
pub mod formats;
pub mod graphs;
pub mod imprimitivity;
pub mod linalg;
pub mod product_systems;
