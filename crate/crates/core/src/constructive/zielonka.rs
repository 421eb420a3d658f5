//! Reduction of `π_k` on `SZ_k` to the all-0 coloring in `4k − 7` inversions.
//!
//! The first `2k − 2` sets turn the coloring into one whose restriction to
//! `G_k` is `σ_k` and in which every vertex has a twin in `G_k`. The remaining
//! `2k − 5` sets zero `σ_k` on `G_k` and are carried to the twins.

use std::collections::{HashMap, HashSet};

use super::{extend_to_twin, ConstructiveError};
use crate::graph::{ColoredGraph, InversionSequence};
use crate::targets::{zielonka, Zielonka, ZielonkaVertex, ZIELONKA_MAX_K};

/// Both phases of the reduction, over the vertex ids of `SZ_k`.
#[derive(Debug, Clone)]
pub struct ZielonkaReduction {
    pub k: usize,
    pub first_phase: InversionSequence,
    pub second_phase: InversionSequence,
    /// Coloring of `SZ_k` after the first phase.
    pub mid_state: ColoredGraph,
}

impl ZielonkaReduction {
    pub fn sequence(&self) -> InversionSequence {
        let mut s = self.first_phase.clone();
        s.extend(self.second_phase.clone());
        s
    }
}

/// The first-phase sets on `SZ_k`, as labels.
fn first_phase_sets(k: usize) -> Vec<Vec<ZielonkaVertex>> {
    if k == 1 {
        return Vec::new();
    }
    let z = zielonka(k).expect("k in range");
    let (a, b): (Vec<ZielonkaVertex>, Vec<ZielonkaVertex>) = z
        .vertices
        .iter()
        .cloned()
        .partition(|v| (v.part == 1 && v.sign(2) == -1) || (v.part >= 2 && v.sign(1) == 1));
    let mut out = vec![a, b];
    for set in first_phase_sets(k - 1) {
        let lifted: Vec<ZielonkaVertex> = set.iter().map(|w| w.phi().shifted_up()).collect();
        let negated: Vec<ZielonkaVertex> = lifted.iter().map(ZielonkaVertex::negated).collect();
        out.push(lifted.into_iter().chain(negated).collect());
    }
    out
}

/// Zeroes `σ_k` given as the coloring `g` of `G_k` with labels `verts`.
fn sigma_sets(k: usize, g: &ColoredGraph, verts: &[ZielonkaVertex]) -> Result<Vec<Vec<ZielonkaVertex>>, ConstructiveError> {
    let local: HashMap<&ZielonkaVertex, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if k == 3 {
        let ones: Vec<_> = g.edges().iter().filter(|e| e.color).collect();
        if ones.len() != 1 {
            return Err(ConstructiveError::Internal(format!("sigma_3 has {} edges colored 1", ones.len())));
        }
        return Ok(vec![vec![verts[ones[0].u].clone(), verts[ones[0].v].clone()]]);
    }
    let u = verts.iter().position(|v| v.part == k).expect("G_k has a part-k vertex");
    let y: Vec<usize> = g.neighbors(u).iter().filter(|x| x.1).map(|x| x.0).collect();
    let mut yu = y.clone();
    yu.push(u);
    let after = g.apply_inversion(&yu)?.apply_inversion(&y)?;

    let embed = |w: &ZielonkaVertex| {
        let mut signs = w.signs.clone();
        signs.push(1);
        ZielonkaVertex { part: w.part, signs }
    };
    let sub = zielonka(k - 1).expect("k - 1 in range");
    let sub_verts: Vec<ZielonkaVertex> = sub.gk_vertices().into_iter().map(|i| sub.vertices[i].clone()).collect();
    let ids: Vec<usize> = sub_verts.iter().map(|w| local[&embed(w)]).collect();
    let (sub_graph, _) = after.induced(&ids)?;
    let mut out = vec![yu.iter().map(|&i| verts[i].clone()).collect(), y.iter().map(|&i| verts[i].clone()).collect()];
    for set in sigma_sets(k - 1, &sub_graph, &sub_verts)? {
        let mut lifted: Vec<ZielonkaVertex> = set.iter().map(embed).collect();
        let twins: Vec<ZielonkaVertex> = lifted
            .iter()
            .map(|w| {
                let mut t = w.clone();
                t.signs[k - 1] = -1;
                t
            })
            .filter(|t| local.contains_key(t))
            .collect();
        lifted.extend(twins);
        out.push(lifted);
    }
    Ok(out)
}

fn to_ids(z: &Zielonka, sets: &[Vec<ZielonkaVertex>]) -> InversionSequence {
    InversionSequence::new(
        sets.iter()
            .map(|s| s.iter().map(|v| z.id(v).expect("vertex of SZ_k")).collect())
            .collect(),
    )
}

/// Twin classes of `g`, keyed by the sorted colored neighborhood.
fn twin_classes(g: &ColoredGraph) -> Vec<Vec<usize>> {
    let mut classes: HashMap<Vec<(usize, bool)>, Vec<usize>> = HashMap::new();
    for v in 0..g.n() {
        let mut nb = g.neighbors(v).to_vec();
        nb.sort_unstable();
        classes.entry(nb).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    out
}

/// Whether `mid` restricted to `G_k` equals `σ_k` and every twin class of
/// `mid` meets `G_k` exactly once.
pub fn mid_state_holds(z: &Zielonka, mid: &ColoredGraph) -> bool {
    let gk: HashSet<usize> = z.gk_vertices().into_iter().collect();
    let labeled_equal = z
        .graph
        .edges()
        .iter()
        .filter(|e| gk.contains(&e.u) && gk.contains(&e.v))
        .all(|e| mid.color(e.u, e.v) == Some(e.color));
    labeled_equal && twin_classes(mid).iter().all(|c| c.iter().filter(|v| gk.contains(v)).count() == 1)
}

pub fn zielonka_reduction(k: usize) -> Result<ZielonkaReduction, ConstructiveError> {
    if !(3..=ZIELONKA_MAX_K).contains(&k) {
        return Err(ConstructiveError::OutOfRange(format!(
            "zielonka_sequence needs 3 <= k <= {ZIELONKA_MAX_K}, got {k}"
        )));
    }
    let z = zielonka(k)?;
    let first_phase = to_ids(&z, &first_phase_sets(k));
    let mid_state = z.graph.apply_sequence(&first_phase)?;
    if first_phase.len() != 2 * k - 2 || !mid_state_holds(&z, &mid_state) {
        return Err(ConstructiveError::Internal("first phase postcondition failed".into()));
    }

    let gk = z.gk_vertices();
    let verts: Vec<ZielonkaVertex> = gk.iter().map(|&i| z.vertices[i].clone()).collect();
    let (sigma, _) = mid_state.induced(&gk)?;
    let mut second_phase = to_ids(&z, &sigma_sets(k, &sigma, &verts)?);
    let in_g: HashSet<usize> = gk.iter().copied().collect();
    for class in twin_classes(&mid_state) {
        let rep = *class.iter().find(|v| in_g.contains(v)).expect("class meets G_k");
        for &v in class.iter().filter(|&&v| v != rep) {
            second_phase = extend_to_twin(&second_phase, rep, v);
        }
    }

    let r = ZielonkaReduction { k, first_phase, second_phase, mid_state };
    let seq = r.sequence();
    if seq.len() > 4 * k - 7 || !z.graph.apply_sequence(&seq)?.is_all_zero() {
        return Err(ConstructiveError::Internal("reduction does not zero pi_k".into()));
    }
    Ok(r)
}

/// Inversion sequence of length at most `4k − 7` zeroing `π_k`.
pub fn zielonka_sequence(k: usize) -> Result<InversionSequence, ConstructiveError> {
    zielonka_reduction(k).map(|r| r.sequence())
}
