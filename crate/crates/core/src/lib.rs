//! Exact computations on inversions of 2-edge-colored graphs.

pub mod cert;
pub mod constructive;
pub mod f2;
pub mod graph;
pub mod hom;
pub mod solver;
pub mod suite;
pub mod targets;

pub use f2::{AffineSubspace, F2Matrix, F2Vector};
pub use graph::{ColoredGraph, Edge, InversionSequence, Orientation};
pub use solver::{
    diameter, find_inversion, norm, sequence_from_assignment, verify_assignment, Assignment, Budget, Outcome,
    SolveOptions, SolveResult,
};
