//! Executable versions of the constructive upper bounds.

mod subdivision;
mod trianglefree;
mod zielonka;

use thiserror::Error;

use crate::f2::F2Vector;
use crate::graph::{ColoredGraph, GraphError, InversionSequence};
use crate::solver::{Assignment, SolveError};
use crate::targets::{tromp, TargetError};

pub use crate::hom::hom_lift;
pub use subdivision::{subdivision_sequence, SubdivisionMap, SubdivisionReport};
pub use trianglefree::{trianglefree_dimension, trianglefree_inversion};
pub use zielonka::{mid_state_holds, zielonka_reduction, zielonka_sequence, ZielonkaReduction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructiveError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("graph has a triangle {0:?}")]
    Triangle((usize, usize, usize)),
    #[error("input assignment does not verify")]
    BadAssignment,
    #[error("inconsistent subdivision map: {0}")]
    BadSubdivision(String),
    #[error("base solver: {0}")]
    BaseSolver(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Adds the removed twin `v` to every set containing the survivor `u`.
pub fn extend_to_twin(s: &InversionSequence, u: usize, v: usize) -> InversionSequence {
    let sets = s
        .sets
        .iter()
        .map(|set| {
            let mut out = set.clone();
            if set.contains(&u) && !set.contains(&v) {
                out.push(v);
            }
            out
        })
        .collect();
    InversionSequence::new(sets)
}

/// Lifts an assignment for `(G, 1 − π)` to the Tromp graph of `(G, π)`:
/// `u ↦ (0, 1, a(u))`, `u' ↦ (1, 0, a(u))`, `∞ ↦ e_0`, `∞' ↦ e_1`.
pub fn tromp_lift(g: &ColoredGraph, a: &Assignment) -> Result<Assignment, ConstructiveError> {
    if a.len() != g.n() || !a.satisfies(&g.complemented()) {
        return Err(ConstructiveError::BadAssignment);
    }
    let t = a.t() + 2;
    let mut vectors: Vec<F2Vector> = a.vectors().iter().map(|x| x.prepend(&[false, true])).collect();
    vectors.extend(a.vectors().iter().map(|x| x.prepend(&[true, false])));
    vectors.push(F2Vector::unit(t, 0));
    vectors.push(F2Vector::unit(t, 1));
    let lifted = Assignment::new(t, vectors)?;
    if !lifted.satisfies(&tromp(g)) {
        return Err(ConstructiveError::Internal("tromp lift does not verify".into()));
    }
    Ok(lifted)
}
