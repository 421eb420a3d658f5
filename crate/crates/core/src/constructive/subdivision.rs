//! Inversion sequences for subdivisions built from a sequence provider on the
//! base graph.

use super::ConstructiveError;
use crate::graph::{ColoredGraph, InversionSequence};
use crate::solver::{find_inversion, SolveOptions};

/// A graph `H` obtained from `G` by replacing edge `i` of `G` with the path
/// `paths[i] = (u, u', …, v', v)`. Base vertices keep their ids in `H`.
#[derive(Debug, Clone)]
pub struct SubdivisionMap {
    base: ColoredGraph,
    subdivided: ColoredGraph,
    paths: Vec<Vec<usize>>,
}

impl SubdivisionMap {
    /// Subdivides edge `i` of `base` into a path with `lengths[i] ≥ 1` edges.
    /// New vertices are numbered after the base vertices, edge by edge.
    pub fn new(base: &ColoredGraph, lengths: &[usize]) -> Result<Self, ConstructiveError> {
        if lengths.len() != base.m() {
            return Err(ConstructiveError::BadSubdivision(format!(
                "{} lengths for {} edges",
                lengths.len(),
                base.m()
            )));
        }
        let mut next = base.n();
        let mut paths = Vec::with_capacity(base.m());
        let mut edges = Vec::new();
        for (e, &len) in base.edges().iter().zip(lengths) {
            if len == 0 {
                return Err(ConstructiveError::BadSubdivision("path of length 0".into()));
            }
            let mut p = vec![e.u];
            p.extend(next..next + len - 1);
            p.push(e.v);
            next += len - 1;
            edges.extend(p.windows(2).map(|w| (w[0], w[1], false)));
            paths.push(p);
        }
        let subdivided = ColoredGraph::new(next, edges)?;
        Self::from_parts(base.clone(), subdivided, paths)
    }

    /// Checks that the paths join the endpoints of the matching base edges,
    /// are internally disjoint, avoid base vertices inside, and cover `E(H)`.
    pub fn from_parts(base: ColoredGraph, subdivided: ColoredGraph, paths: Vec<Vec<usize>>) -> Result<Self, ConstructiveError> {
        let bad = |msg: String| Err(ConstructiveError::BadSubdivision(msg));
        if paths.len() != base.m() {
            return bad(format!("{} paths for {} edges", paths.len(), base.m()));
        }
        if subdivided.n() < base.n() {
            return bad("subdivided graph has fewer vertices than the base".into());
        }
        let mut interior_seen = vec![false; subdivided.n()];
        let mut covered = 0;
        for (e, p) in base.edges().iter().zip(&paths) {
            if p.len() < 2 || p[0] != e.u || p[p.len() - 1] != e.v {
                return bad(format!("path {p:?} does not join {} and {}", e.u, e.v));
            }
            for &w in &p[1..p.len() - 1] {
                if w < base.n() || w >= subdivided.n() || std::mem::replace(&mut interior_seen[w], true) {
                    return bad(format!("interior vertex {w} is shared or invalid"));
                }
            }
            if !p.windows(2).all(|w| subdivided.has_edge(w[0], w[1])) {
                return bad(format!("path {p:?} is not a path of H"));
            }
            covered += p.len() - 1;
        }
        if covered != subdivided.m() {
            return bad("paths do not cover every edge of H".into());
        }
        if (base.n()..subdivided.n()).any(|w| !interior_seen[w]) {
            return bad("H has a vertex outside every path".into());
        }
        Ok(SubdivisionMap { base, subdivided, paths })
    }

    pub fn base(&self) -> &ColoredGraph {
        &self.base
    }

    pub fn subdivided(&self) -> &ColoredGraph {
        &self.subdivided
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    fn interior(&self, i: usize) -> &[usize] {
        let p = &self.paths[i];
        &p[1..p.len() - 1]
    }
}

/// The sequence with its three phases counted separately.
#[derive(Debug, Clone)]
pub struct SubdivisionReport {
    pub sequence: InversionSequence,
    /// Number of colors of the proper coloring of `G` used for labeling.
    pub colors: usize,
    pub good_sets: usize,
    pub forest_sets: usize,
    pub base_sets: usize,
}

fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (k - 1).ilog2() as usize + 1
    }
}

fn first_last_agree(m: &SubdivisionMap, cur: &ColoredGraph) -> bool {
    m.paths.iter().all(|p| {
        let n = p.len();
        cur.color(p[0], p[1]) == cur.color(p[n - 2], p[n - 1])
    })
}

fn monochromatic(m: &SubdivisionMap, cur: &ColoredGraph) -> bool {
    m.paths.iter().all(|p| {
        let c = cur.color(p[0], p[1]);
        p.windows(2).all(|w| cur.color(w[0], w[1]) == c)
    })
}

/// Zeroes `pi`, a coloring of the subdivided graph. `base_solver` must return
/// a sequence zeroing any coloring of the base graph it is given.
pub fn subdivision_sequence<F>(
    m: &SubdivisionMap,
    pi: &ColoredGraph,
    mut base_solver: F,
) -> Result<SubdivisionReport, ConstructiveError>
where
    F: FnMut(&ColoredGraph) -> Result<InversionSequence, String>,
{
    let h = &m.subdivided;
    if pi.n() != h.n() || pi.m() != h.m() || !h.edges().iter().all(|e| pi.has_edge(e.u, e.v)) {
        return Err(ConstructiveError::BadSubdivision("coloring is not on the subdivided graph".into()));
    }
    let mut out = InversionSequence::default();
    let mut cur = pi.clone();

    // Make the two end edges of every path agree. Vertices are labeled by
    // the bits of `color - 1`; each disagreeing edge is fixed in the lowest
    // coordinate where its endpoint labels differ.
    let coloring = m.base.degeneracy_coloring();
    let colors = coloring.iter().copied().max().unwrap_or(0);
    let ell = ceil_log2(colors);
    let in_x = |v: usize, i: usize| (coloring[v] - 1) >> i & 1 == 1;
    let mut good: Vec<Vec<usize>> = (0..ell)
        .map(|i| (0..m.base.n()).filter(|&v| in_x(v, i)).collect())
        .collect();
    for p in &m.paths {
        let n = p.len();
        let (u, v) = (p[0], p[n - 1]);
        if pi.color(u, p[1]) == pi.color(p[n - 2], v) {
            continue;
        }
        let i = ((coloring[u] - 1) ^ (coloring[v] - 1)).trailing_zeros() as usize;
        good[i].push(if in_x(u, i) { p[1] } else { p[n - 2] });
    }
    // a coordinate with no repaired path would only flip unsubdivided edges
    let base_only: Vec<usize> = (0..ell).map(|i| (0..m.base.n()).filter(|&v| in_x(v, i)).count()).collect();
    let mut good_sets = 0;
    for set in good.into_iter().zip(base_only).filter(|(s, b)| s.len() > *b).map(|(s, _)| s) {
        cur = cur.apply_inversion(&set)?;
        out.push(set);
        good_sets += 1;
    }
    if !first_last_agree(m, &cur) {
        return Err(ConstructiveError::Internal("coloring is not good after labeling phase".into()));
    }

    // The interior vertices induce a path forest; each path is recolored
    // towards its end color with a 2-inversion.
    let mut forest = [Vec::new(), Vec::new()];
    for (i, p) in m.paths.iter().enumerate() {
        let inner = m.interior(i);
        if inner.len() < 2 {
            continue;
        }
        let target = cur.color(p[0], p[1]).expect("path edge");
        let colors: Vec<bool> = inner.windows(2).map(|w| cur.color(w[0], w[1]).expect("path edge") ^ target).collect();
        let r = find_inversion(&ColoredGraph::path(&colors), 2, &SolveOptions::default())?;
        let a = r
            .assignment()
            .ok_or_else(|| ConstructiveError::Internal(format!("path {i} has no 2-inversion")))?;
        for (j, set) in forest.iter_mut().enumerate() {
            set.extend(inner.iter().enumerate().filter(|&(x, _)| a.get(x).get(j)).map(|(_, &w)| w));
        }
    }
    let mut forest_sets = 0;
    for set in forest.into_iter().filter(|s| !s.is_empty()) {
        cur = cur.apply_inversion(&set)?;
        out.push(set);
        forest_sets += 1;
    }
    if !monochromatic(m, &cur) {
        return Err(ConstructiveError::Internal("paths are not monochromatic after forest phase".into()));
    }

    // Solve the induced coloring of G and lift through the paths.
    let hat = m.base.recolor(|i, _| cur.color(m.paths[i][0], m.paths[i][1]).expect("path edge"));
    let base_seq = base_solver(&hat).map_err(ConstructiveError::BaseSolver)?;
    base_seq.validate(m.base.n())?;
    if !hat.apply_sequence(&base_seq)?.is_all_zero() {
        return Err(ConstructiveError::BaseSolver("sequence does not zero the base coloring".into()));
    }
    for set in &base_seq.sets {
        let mut member = vec![false; m.base.n()];
        for &v in set {
            member[v] = true;
        }
        let mut lifted = set.clone();
        for (i, e) in m.base.edges().iter().enumerate() {
            if member[e.u] && member[e.v] {
                lifted.extend_from_slice(m.interior(i));
            }
        }
        cur = cur.apply_inversion(&lifted)?;
        out.push(lifted);
    }

    if !cur.is_all_zero() || out.len() > base_seq.len() + ell + 2 {
        return Err(ConstructiveError::Internal("final coloring is not all-0".into()));
    }
    Ok(SubdivisionReport {
        sequence: out,
        colors,
        good_sets,
        forest_sets,
        base_sets: base_seq.len(),
    })
}
