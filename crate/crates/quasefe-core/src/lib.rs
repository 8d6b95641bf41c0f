//! Construction and verification of quasiplanar simultaneous embeddings
//! with fixed edges (QuaSEFE).
//!
//! A QuaSEFE instance is a family of graphs `G_1, ..., G_k` over one shared
//! vertex set. A solution is a single topological drawing of the union in
//! which every vertex has one position, every shared edge is drawn once, and
//! each layer `Γ_i` is quasiplanar: no three of its edges pairwise cross.
//!
//! The crate is organized around one central data structure, the
//! [`arrangement::Arrangement`]: a combinatorial planarization of the union
//! drawing (curves with ordered crossing sequences plus the rotation system
//! of the crossing-augmented graph). Constructors build arrangements layer
//! by layer through dual-graph routing; verifiers re-derive per-layer
//! crossing graphs from the arrangement and check triangle-freeness.
//!
//! The crate is `no_std` (alloc required); IO, file formats and the CLI live
//! in the companion `quasefe` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arrangement;


pub mod constructors;
pub mod counterexamples;
pub mod geom;
pub mod graph;
pub mod pep;
pub mod planar;


pub use arrangement::Arrangement;
pub use graph::{Edge, LayeredGraph, SubgraphLattice, VertexId};
pub use planar::RotationSystem;
