//! Executable graph-homomorphism algebra for small graphs.
//!
//! * [`graph`] and [`graph6`]: the graph model, named graphs, serialization.
//! * [`iso`]: canonical forms, isomorphism, automorphisms.
//! * [`hom`]: homomorphism search with arc consistency.
//! * [`cores`]: core recognition and computation.
//! * [`algebra`]: graph powers, polymorphisms, semiprojections, projectivity.
//! * [`relations`]: finite relations, pp/qfpp formulas, walls.
//! * [`classify`]: exhaustive classification of small cores.

pub mod algebra;
pub mod classify;
pub mod cores;
pub mod graph;
pub mod graph6;
pub mod hom;
pub mod iso;
pub mod relations;

pub use graph::{clique, cycle, named, Graph, GraphError, OddGirth, VertexSet};
pub use hom::{find_hom, HomError, PartialMap};
pub use iso::{canon, is_isomorphic, CanonicalForm};
