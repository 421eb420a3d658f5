//! Triangle-free graphs admit a `(Δ + ⌊log Δ⌋)`-inversion.

use super::ConstructiveError;
use crate::f2::{by_weight, pick_by_dot, solve_affine, AffineSubspace, F2Matrix, F2Vector};
use crate::graph::ColoredGraph;
use crate::solver::Assignment;

/// Largest dimension for which the vector scan is attempted.
const MAX_T: usize = 24;

/// `Δ + ⌊log₂ Δ⌋` for `Δ ≥ 1`.
pub fn trianglefree_dimension(max_degree: usize) -> usize {
    assert!(max_degree >= 1);
    max_degree + max_degree.ilog2() as usize
}

/// Vertices are inserted in reverse elimination order. Each new vertex `u`
/// gets the first vector (by weight) outside every `E_i^⊥`, where `v_i + E_i`
/// is the solution space of neighbor `v_i` without the `uv_i` constraint; each
/// `v_i` is then moved inside its space to satisfy `uv_i`.
pub fn trianglefree_inversion(g: &ColoredGraph) -> Result<Assignment, ConstructiveError> {
    if let Some(tri) = g.find_triangle() {
        return Err(ConstructiveError::Triangle(tri));
    }
    let delta = g.max_degree();
    if delta == 0 {
        return Err(ConstructiveError::OutOfRange("graph has no edges".into()));
    }
    let t = trianglefree_dimension(delta);
    if t > MAX_T {
        return Err(ConstructiveError::OutOfRange(format!("dimension {t} exceeds {MAX_T}")));
    }
    let (order, _) = g.elimination_order();
    let mut placed = vec![false; g.n()];
    let mut vec: Vec<F2Vector> = vec![F2Vector::zero(t); g.n()];

    for &u in order.iter().rev() {
        let nbrs: Vec<(usize, bool)> = g.neighbors(u).iter().copied().filter(|&(v, _)| placed[v]).collect();
        let k = nbrs.len();
        if (k as u64) << (delta - 1) >= 1u64 << t {
            return Err(ConstructiveError::Internal(format!("count bound fails at vertex {u}")));
        }
        let mut spaces: Vec<AffineSubspace> = Vec::with_capacity(k);
        for &(v, _) in &nbrs {
            let (rows, rhs): (Vec<F2Vector>, Vec<bool>) = g
                .neighbors(v)
                .iter()
                .filter(|&&(w, _)| placed[w])
                .map(|&(w, c)| (vec[w], c))
                .unzip();
            let b = rhs.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c as u64) << i);
            let space = solve_affine(&F2Matrix::new(t, rows).expect("rows of dimension t"), &F2Vector::truncated(rhs.len(), b))
                .map_err(|e| ConstructiveError::Internal(format!("neighbor {v} of {u}: {e}")))?;
            if !space.contains(&vec[v]) || space.dim() + delta < t + 1 {
                return Err(ConstructiveError::Internal(format!("solution space of {v} is too small")));
            }
            spaces.push(space);
        }
        let x = by_weight(t)
            .find(|x| spaces.iter().all(|s| !s.direction_orthogonal_to(x)))
            .ok_or_else(|| ConstructiveError::Internal(format!("no admissible vector for {u}")))?;
        vec[u] = x;
        for (&(v, c), space) in nbrs.iter().zip(&spaces) {
            vec[v] = pick_by_dot(&x, space, c).map_err(|e| ConstructiveError::Internal(e.to_string()))?;
        }
        placed[u] = true;
    }

    let a = Assignment::new(t, vec)?;
    if !a.satisfies(g) {
        return Err(ConstructiveError::Internal("assignment does not verify".into()));
    }
    Ok(a)
}
