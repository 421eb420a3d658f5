//! Gadgets G₁–G₄, the final lower-bound graph, and the committed figure data.

use super::{paley, TargetError};
use crate::f2::{by_weight, F2Vector};
use crate::graph::{parse_graph, ColoredGraph};
use crate::solver::{Assignment, SolveOptions};

const G3_CORE: &str = include_str!("../../data/g3_core.graph");
const G4_CORE: &str = include_str!("../../data/g4_core.graph");
const FINAL_CORE: &str = include_str!("../../data/final_core.graph");
const GIRTH4_LB: &str = include_str!("../../data/girth4_lb.graph");
const SP5_WITNESS: &str = include_str!("../../data/sp5_witness.txt");
const SP9_WITNESS: &str = include_str!("../../data/sp9_witness.txt");

pub const BUILTIN_NAMES: [&str; 6] = ["g3_core", "g4_core", "final_core", "girth4_lb", "sp5_witness", "sp9_witness"];

/// A graph with distinguished vertices; `distinguished[0]` is the gluing vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    pub graph: ColoredGraph,
    pub distinguished: Vec<usize>,
}

impl GadgetGraph {
    pub fn v(&self) -> usize {
        self.distinguished[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Gadget(GadgetGraph),
    Witness { graph: ColoredGraph, assignment: Assignment },
}

impl Builtin {
    pub fn graph(&self) -> &ColoredGraph {
        match self {
            Builtin::Gadget(g) => &g.graph,
            Builtin::Witness { graph, .. } => graph,
        }
    }
}

fn data(name: &str) -> Result<&'static str, TargetError> {
    Ok(match name {
        "g3_core" => G3_CORE,
        "g4_core" => G4_CORE,
        "final_core" => FINAL_CORE,
        "girth4_lb" => GIRTH4_LB,
        "sp5_witness" => SP5_WITNESS,
        "sp9_witness" => SP9_WITNESS,
        other => return Err(TargetError::UnknownBuiltin(other.to_string())),
    })
}

/// The committed data file for `name`.
pub fn builtin_text(name: &str) -> Result<String, TargetError> {
    let text = data(name)?;
    if !name.ends_with("_witness") {
        return Ok(text.to_string());
    }
    let Builtin::Witness { graph, .. } = builtin(name)? else {
        unreachable!("witness names load witnesses")
    };
    let comments: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("c ")).collect();
    Ok(graph.to_text_with_comments(&comments))
}

pub fn builtin(name: &str) -> Result<Builtin, TargetError> {
    let text = data(name)?;
    if name.ends_with("_witness") {
        return parse_witness(text);
    }
    let mut graph = parse_graph(text)?;
    let mut labels: Vec<String> = (0..graph.n()).map(|v| v.to_string()).collect();
    let mut distinguished = Vec::new();
    for line in text.lines() {
        let mut f = line.split_whitespace();
        if let (Some("c"), Some("label"), Some(id), Some(label)) = (f.next(), f.next(), f.next(), f.next()) {
            let id: usize = id.parse().map_err(|_| TargetError::Data(format!("bad label line {line:?}")))?;
            graph.check_vertex(id)?;
            labels[id] = label.to_string();
            if label == "v" {
                distinguished.push(id);
            }
        }
    }
    graph = graph.with_labels(labels)?;
    if distinguished.is_empty() {
        distinguished.push(0);
    }
    Ok(Builtin::Gadget(GadgetGraph { graph, distinguished }))
}

fn parse_witness(text: &str) -> Result<Builtin, TargetError> {
    let mut q = None;
    let mut entries = Vec::new();
    for line in text.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.as_slice() {
            ["q", order] => q = order.parse::<usize>().ok(),
            ["w", id, bits] => {
                let id: usize = id.parse().map_err(|_| TargetError::Data(format!("bad witness line {line:?}")))?;
                let x = F2Vector::from_bitstring(bits).map_err(|e| TargetError::Data(e.to_string()))?;
                entries.push((id, x));
            }
            ["c", ..] | [] => {}
            _ => return Err(TargetError::Data(format!("bad witness line {line:?}"))),
        }
    }
    let q = q.ok_or_else(|| TargetError::Data("missing field order".into()))?;
    let graph = paley(q)?;
    let t = entries.first().map_or(0, |(_, x)| x.dim());
    let mut vectors = vec![None; q];
    for (id, x) in entries {
        graph.check_vertex(id)?;
        vectors[id] = Some(x);
    }
    let vectors: Option<Vec<F2Vector>> = vectors.into_iter().collect();
    let vectors = vectors.ok_or_else(|| TargetError::Data("witness misses a vertex".into()))?;
    let assignment = Assignment::new(t, vectors).map_err(|e| TargetError::Data(e.to_string()))?;
    Ok(Builtin::Witness { graph, assignment })
}

fn gadget(name: &str) -> GadgetGraph {
    match builtin(name).expect("committed data parses") {
        Builtin::Gadget(g) => g,
        Builtin::Witness { .. } => unreachable!("{name} is a gadget"),
    }
}

fn extend(g: &ColoredGraph, extra_vertices: usize, extra_edges: Vec<(usize, usize, bool)>) -> ColoredGraph {
    let edges = g.edges().iter().map(|e| (e.u, e.v, e.color)).chain(extra_edges);
    ColoredGraph::new(g.n() + extra_vertices, edges).expect("gluing keeps the graph simple")
}

/// Adds a vertex `w` per edge `uv` with `uw` colored 0 and `vw` colored 1.
pub fn glue_g2_on_edges(g: &ColoredGraph) -> ColoredGraph {
    let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    glue_g2_on(g, &pairs)
}

fn glue_g2_on(g: &ColoredGraph, pairs: &[(usize, usize)]) -> ColoredGraph {
    let n = g.n();
    let extra = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, &(u, v))| [(u, n + i, false), (v, n + i, true)])
        .collect();
    extend(g, pairs.len(), extra)
}

/// Adds a pendant edge colored 1 at every vertex.
pub fn glue_g1_on_vertices(g: &ColoredGraph) -> ColoredGraph {
    let n = g.n();
    extend(g, n, (0..n).map(|v| (v, n + v, true)).collect())
}

/// Disjoint union of `host` and `gadget` with the gadget's gluing vertex
/// identified with `at`; the other gadget vertices are appended in order.
pub fn identify_distinguished(host: &ColoredGraph, gadget: &GadgetGraph, at: usize) -> Result<ColoredGraph, TargetError> {
    host.check_vertex(at)?;
    let gv = gadget.v();
    let base = host.n();
    let map = |x: usize| match x {
        x if x == gv => at,
        x if x < gv => base + x,
        x => base + x - 1,
    };
    let extra = gadget.graph.edges().iter().map(|e| (map(e.u), map(e.v), e.color)).collect();
    Ok(extend(host, gadget.graph.n() - 1, extra))
}

/// Core graph plus restrictions standing in for the glued gadgets.
#[derive(Debug, Clone)]
pub struct ElidedModel {
    pub graph: ColoredGraph,
    pub options: SolveOptions,
    pub t: usize,
    pub v: usize,
}

fn edge_disequalities(g: &ColoredGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}

/// G₃ core with G₂ on every edge and G₁ on every vertex.
pub fn g3_materialized() -> GadgetGraph {
    let core = gadget("g3_core");
    GadgetGraph {
        graph: glue_g2_on(&glue_g1_on_vertices(&core.graph), &edge_disequalities(&core.graph))
            .with_labels_from(&core.graph),
        distinguished: core.distinguished,
    }
}

/// G₃ at `t = 5`: pendant 1-edges become strictness, glued G₂'s become
/// disequalities along the edges.
pub fn g3_elided() -> ElidedModel {
    let core = gadget("g3_core");
    let options = SolveOptions {
        strict: true,
        disequalities: edge_disequalities(&core.graph),
        ..Default::default()
    };
    ElidedModel { v: core.v(), graph: core.graph, options, t: 5 }
}

/// G₄ core with G₂ on every edge and a G₃ copy at every vertex.
pub fn g4_materialized() -> GadgetGraph {
    let core = gadget("g4_core");
    let g3 = g3_materialized();
    let mut g = glue_g2_on_edges(&core.graph);
    for v in 0..core.graph.n() {
        g = identify_distinguished(&g, &g3, v).expect("core vertex");
    }
    GadgetGraph { graph: g, distinguished: core.distinguished }
}

/// G₄ at `t = 5`: each core vertex carries a G₃, so it is neither null nor all-ones.
pub fn g4_elided() -> ElidedModel {
    let core = gadget("g4_core");
    let t = 5;
    let allowed: Vec<F2Vector> = by_weight(t).filter(|x| x.weight() != 0 && x.weight() != t as u32).collect();
    let options = SolveOptions {
        disequalities: edge_disequalities(&core.graph),
        ..Default::default()
    }
    .uniform_domain(core.graph.n(), allowed);
    ElidedModel { v: core.v(), graph: core.graph, options, t }
}

/// Final core at dimension `t`, every vertex restricted to odd weight other
/// than all-ones (weights 1 and 3 at `t = 5`), disequalities along edges.
pub fn final_model(t: usize) -> ElidedModel {
    let core = gadget("final_core");
    let allowed: Vec<F2Vector> = by_weight(t).filter(|x| x.weight() % 2 == 1 && x.weight() != t as u32).collect();
    let options = SolveOptions {
        disequalities: edge_disequalities(&core.graph),
        ..Default::default()
    }
    .uniform_domain(core.graph.n(), allowed);
    ElidedModel { v: core.v(), graph: core.graph, options, t }
}

trait LabelsFrom {
    fn with_labels_from(self, core: &ColoredGraph) -> Self;
}

impl LabelsFrom for ColoredGraph {
    /// Keeps the core labels and numbers the added vertices.
    fn with_labels_from(self, core: &ColoredGraph) -> Self {
        let labels = (0..self.n())
            .map(|v| core.label(v).map_or_else(|| v.to_string(), str::to_string))
            .collect();
        self.with_labels(labels).expect("one label per vertex")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::verify_assignment;

    #[test]
    fn figure_counts() {
        let g3 = builtin("g3_core").unwrap();
        assert_eq!((g3.graph().n(), g3.graph().m(), g3.graph().ones()), (5, 9, 3));
        let g4 = builtin("g4_core").unwrap();
        assert_eq!((g4.graph().n(), g4.graph().m(), g4.graph().ones()), (11, 27, 16));
        let fin = builtin("final_core").unwrap();
        assert_eq!((fin.graph().n(), fin.graph().m(), fin.graph().ones()), (4, 6, 3));
        let lb = builtin("girth4_lb").unwrap();
        assert_eq!((lb.graph().n(), lb.graph().m()), (15, 25));
        assert_eq!(lb.graph().girth(), Some(4));
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn witnesses_verify() {
        for (name, t) in [("sp5_witness", 3), ("sp9_witness", 5)] {
            let Builtin::Witness { graph, assignment } = builtin(name).unwrap() else { panic!() };
            assert_eq!(assignment.t(), t);
            assert!(verify_assignment(&graph, &assignment, &SolveOptions::default()));
        }
    }

    #[test]
    fn text_carries_figure_comment() {
        for name in BUILTIN_NAMES {
            let text = builtin_text(name).unwrap();
            assert!(text.lines().any(|l| l.starts_with("c figure:")), "{name}");
            assert_eq!(parse_graph(&text).unwrap().canonical_text(), builtin(name).unwrap().graph().canonical_text());
        }
    }

    #[test]
    fn gluing_counts() {
        let e = ColoredGraph::path(&[true]);
        let g = glue_g2_on_edges(&e);
        assert_eq!((g.n(), g.m()), (3, 3));
        let mut seen: Vec<bool> = g.neighbors(2).iter().map(|x| x.1).collect();
        seen.sort();
        assert_eq!(seen, vec![false, true]);
        let k3 = glue_g1_on_vertices(&ColoredGraph::complete(3, false));
        assert_eq!((k3.n(), k3.m(), k3.ones()), (6, 6, 3));
        let g3 = g3_materialized();
        assert_eq!((g3.graph.n(), g3.graph.m()), (19, 32));
        let host = ColoredGraph::complete(3, false);
        let glued = identify_distinguished(&host, &g3, 1).unwrap();
        assert_eq!(glued.n(), host.n() + g3.graph.n() - 1);
        assert!(identify_distinguished(&host, &g3, 9).is_err());
        let g4 = g4_materialized();
        assert_eq!(g4.graph.n(), 11 + 27 + 11 * 18);
    }

    #[test]
    fn model_domains() {
        let m = final_model(5);
        let d = m.options.domain_of(0).unwrap();
        assert_eq!(d.len(), 5 + 10);
        assert!(d.iter().all(|x| x.weight() == 1 || x.weight() == 3));
        assert_eq!(g4_elided().options.domain_of(3).unwrap().len(), 30);
    }
}
