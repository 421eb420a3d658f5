//! Named target graphs, gadgets and the figure transcriptions.

mod field;
mod gadgets;
mod zielonka;

use thiserror::Error;

use crate::graph::{ColoredGraph, GraphError};

pub use field::{Field, FieldElement};
pub use gadgets::{
    builtin, builtin_text, final_model, g3_elided, g3_materialized, g4_elided, g4_materialized, glue_g1_on_vertices,
    glue_g2_on_edges, identify_distinguished, Builtin, ElidedModel, GadgetGraph, BUILTIN_NAMES,
};
pub use zielonka::{gk_sigma, in_gk, zielonka, Zielonka, ZielonkaVertex, MAX_K as ZIELONKA_MAX_K};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("unsupported field order {0}")]
    UnsupportedOrder(usize),
    #[error("field table check failed: {0}")]
    FieldTable(String),
    #[error("not a Zielonka vertex: {0}")]
    BadVertex(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin data: {0}")]
    Data(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `SP_q`: `K_q` on `F_q` with `xy` colored 1 iff `x - y` is a nonzero square.
pub fn paley(q: usize) -> Result<ColoredGraph, TargetError> {
    let f = Field::new(q)?;
    let squares = f.squares();
    let mut edges = Vec::new();
    for x in f.elements() {
        for y in f.elements().filter(|y| y.value() > x.value()) {
            edges.push((x.value(), y.value(), squares.contains(&f.sub(x, y))));
        }
    }
    let labels = f.elements().map(|x| x.to_string()).collect();
    Ok(ColoredGraph::new(q, edges)?.with_labels(labels)?)
}

/// Tromp graph: `u` keeps id `u`, its anti-twin `u'` is `n + u`, and the poles
/// `∞`, `∞'` are `2n` and `2n + 1`. There is no `∞∞'` edge.
pub fn tromp(g: &ColoredGraph) -> ColoredGraph {
    let n = g.n();
    let (inf, inf2) = (2 * n, 2 * n + 1);
    let mut edges = Vec::with_capacity(4 * g.m() + 4 * n);
    for u in 0..n {
        edges.push((u, inf, false));
        edges.push((n + u, inf2, false));
        edges.push((u, inf2, true));
        edges.push((n + u, inf, true));
    }
    for e in g.edges() {
        edges.push((e.u, e.v, e.color));
        edges.push((n + e.u, n + e.v, e.color));
        edges.push((n + e.u, e.v, !e.color));
        edges.push((e.u, n + e.v, !e.color));
    }
    let mut labels: Vec<String> = (0..n).map(|u| g.label(u).map_or(u.to_string(), str::to_string)).collect();
    let primed: Vec<String> = labels.iter().map(|l| format!("{l}'")).collect();
    labels.extend(primed);
    labels.push("inf".into());
    labels.push("inf'".into());
    ColoredGraph::new(2 * n + 2, edges)
        .and_then(|h| h.with_labels(labels))
        .expect("tromp graph is simple")
}

/// Result of removing twins: `kept[i]` is the original id of reduced vertex
/// `i`; `twin_of` maps each removed vertex to the surviving twin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinReduction {
    pub graph: ColoredGraph,
    pub kept: Vec<usize>,
    pub twin_of: Vec<(usize, usize)>,
}

/// Removes all but the lowest id of every twin class (nonadjacent vertices
/// with identical colored neighborhoods), repeating until none remain.
pub fn twin_reduce(g: &ColoredGraph) -> TwinReduction {
    let mut current = g.clone();
    let mut kept: Vec<usize> = (0..g.n()).collect();
    let mut twin_of = Vec::new();
    loop {
        let mut first: std::collections::HashMap<Vec<(usize, bool)>, usize> = Default::default();
        let mut removed = Vec::new();
        for v in 0..current.n() {
            let mut nb = current.neighbors(v).to_vec();
            nb.sort_unstable();
            match first.get(&nb) {
                Some(&r) => {
                    removed.push(v);
                    twin_of.push((kept[v], kept[r]));
                }
                None => {
                    first.insert(nb, v);
                }
            }
        }
        if removed.is_empty() {
            break;
        }
        let (h, map) = current.remove_vertices(&removed);
        kept = map.iter().map(|&v| kept[v]).collect();
        current = h;
    }
    TwinReduction {
        graph: current,
        kept,
        twin_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::norm;

    #[test]
    fn paley_shapes() {
        let sp5 = paley(5).unwrap();
        let ones: Vec<(usize, usize)> = sp5.edges().iter().filter(|e| e.color).map(|e| (e.u, e.v)).collect();
        assert_eq!(ones, vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        for q in [5, 9, 13] {
            let g = paley(q).unwrap();
            assert_eq!(g.m(), q * (q - 1) / 2);
            for v in 0..q {
                let one = g.neighbors(v).iter().filter(|x| x.1).count();
                assert_eq!(one, (q - 1) / 2);
            }
        }
        assert!(paley(7).is_err());
    }

    #[test]
    fn tromp_shapes() {
        let g = paley(5).unwrap();
        let h = tromp(&g);
        assert_eq!(h.n(), 12);
        assert_eq!(h.m(), 4 * g.m() + 4 * g.n());
        let one = tromp(&ColoredGraph::empty(1));
        assert_eq!((one.n(), one.m()), (4, 4));
        let n = g.n();
        for u in 0..n {
            for w in 0..h.n() {
                if let (Some(a), Some(b)) = (h.color(w, u), h.color(w, n + u)) {
                    assert_ne!(a, b);
                }
                if w != u && w != n + u {
                    assert_eq!(h.has_edge(w, u), h.has_edge(w, n + u));
                }
            }
        }
        assert!(!h.has_edge(2 * n, 2 * n + 1));
    }

    #[test]
    fn twin_examples() {
        let r = twin_reduce(&ColoredGraph::empty(2));
        assert_eq!(r.graph.n(), 1);
        assert_eq!(r.twin_of, vec![(1, 0)]);
        let c4 = ColoredGraph::cycle(&[true, false, true, false]);
        assert_eq!(twin_reduce(&c4).graph.n(), 4);
        let z2 = zielonka(2).unwrap();
        assert_eq!(twin_reduce(&z2.graph).graph.n(), 4);
    }

    #[test]
    fn twin_reduce_preserves_norm() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v, rng.gen_bool(0.5)));
                    }
                }
            }
            let g = ColoredGraph::new(n, edges).unwrap();
            let r = twin_reduce(&g);
            assert_eq!(norm(&g, 10).unwrap().norm, norm(&r.graph, 10).unwrap().norm);
        }
    }
}
