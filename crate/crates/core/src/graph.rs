//! Colored graphs, orientations and inversion sequences.
//!
//! A [`ColoredGraph`] is a simple undirected graph on the dense vertex set
//! `0..n` with one F₂ color per edge. Values are immutable once built; every
//! transformation returns a new graph.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("orientations are over different skeletons")]
    SkeletonMismatch,
    #[error("{0}")]
    Invalid(String),
}

/// An edge stored canonically with `u < v`. `color` is the F₂ value (`true` = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: bool,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<Edge>,
    // (neighbor, color), sorted by neighbor
    adj: Vec<Vec<(usize, bool)>>,
    index: HashMap<(usize, usize), usize>,
    labels: Option<Vec<String>>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl ColoredGraph {
    /// Builds a graph from `(u, v, color)` triples in any endpoint order.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, bool)>,
    {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for (a, b, color) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = key(a, b);
            if index.insert((u, v), list.len()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            list.push(Edge { u, v, color });
        }
        list.sort();
        Ok(Self::from_sorted(n, list, None))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>, labels: Option<Vec<String>>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, e.color));
            adj[e.v].push((e.u, e.color));
            index.insert((e.u, e.v), i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        ColoredGraph {
            n,
            edges,
            adj,
            index,
            labels,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new(), None)
    }

    /// Complete graph with every edge colored `color`.
    pub fn complete(n: usize, color: bool) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, color)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Path `0 - 1 - ... - (len-1)` with the given edge colors.
    pub fn path(colors: &[bool]) -> Self {
        let edges = colors.iter().enumerate().map(|(i, &c)| (i, i + 1, c));
        Self::new(colors.len() + 1, edges).expect("path is simple")
    }

    /// Cycle on `colors.len()` vertices (at least 3).
    pub fn cycle(colors: &[bool]) -> Self {
        let n = colors.len();
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = colors.iter().enumerate().map(|(i, &c)| (i, (i + 1) % n, c));
        Self::new(n, edges).expect("cycle is simple")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::Invalid(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(v)).map(String::as_str)
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, bool)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn color(&self, u: usize, v: usize) -> Option<bool> {
        self.index.get(&key(u, v)).map(|&i| self.edges[i].color)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    /// Number of edges colored 1.
    pub fn ones(&self) -> usize {
        self.edges.iter().filter(|e| e.color).count()
    }

    pub fn is_all_zero(&self) -> bool {
        self.edges.iter().all(|e| !e.color)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Same skeleton, colors replaced edge by edge (in canonical edge order).
    pub fn recolor<F: FnMut(usize, &Edge) -> bool>(&self, mut f: F) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge { color: f(i, e), ..*e })
            .collect();
        Self::from_sorted(self.n, edges, self.labels.clone())
    }

    /// Same skeleton, colors taken from the low bits of `mask` (bit i = edge i).
    pub fn with_color_mask(&self, mask: u64) -> Self {
        self.recolor(|i, _| (mask >> i) & 1 == 1)
    }

    /// Bitmask of the current coloring (requires at most 64 edges).
    pub fn color_mask(&self) -> u64 {
        assert!(self.m() <= 64);
        self.edges
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, e)| acc | ((e.color as u64) << i))
    }

    /// The opposite coloring `1 - π`.
    pub fn complemented(&self) -> Self {
        self.recolor(|_, e| !e.color)
    }

    /// Inverts `set`: every edge with both endpoints in `set` changes color.
    pub fn apply_inversion(&self, set: &[usize]) -> Result<Self, GraphError> {
        let mut inside = vec![false; self.n];
        for &x in set {
            self.check_vertex(x)?;
            inside[x] = true;
        }
        Ok(self.recolor(|_, e| e.color ^ (inside[e.u] && inside[e.v])))
    }

    pub fn apply_sequence(&self, seq: &InversionSequence) -> Result<Self, GraphError> {
        // each edge flips once per set containing both endpoints
        let mut flips = vec![false; self.m()];
        let mut inside = vec![false; self.n];
        for set in &seq.sets {
            for &x in set {
                self.check_vertex(x)?;
                inside[x] = true;
            }
            for (i, e) in self.edges.iter().enumerate() {
                flips[i] ^= inside[e.u] && inside[e.v];
            }
            for &x in set {
                inside[x] = false;
            }
        }
        Ok(self.recolor(|i, e| e.color ^ flips[i]))
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    /// Returns the subgraph and the map from new to old ids.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Self, Vec<usize>), GraphError> {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if new_id[v] != usize::MAX {
                return Err(GraphError::Invalid(format!("vertex {v} listed twice")));
            }
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
            .map(|e| (new_id[e.u], new_id[e.v], e.color));
        let mut g = Self::new(vertices.len(), edges)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok((g, vertices.to_vec()))
    }

    /// Removes the listed vertices; returns the remaining graph and new-to-old ids.
    pub fn remove_vertices(&self, removed: &[usize]) -> (Self, Vec<usize>) {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        self.induced(&keep).expect("kept vertices are valid")
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        if best.map_or(true, |b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        for e in &self.edges {
            for &(w, _) in &self.adj[e.u] {
                if w != e.v && self.has_edge(w, e.v) {
                    return Some((e.u, e.v, w));
                }
            }
        }
        None
    }

    /// Minimum-degree-last elimination order: repeatedly removes a vertex of
    /// minimum remaining degree (lowest id on ties). Returns the removal order
    /// and the degeneracy.
    pub fn elimination_order(&self) -> (Vec<usize>, usize) {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut degeneracy = 0;
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("vertex remains");
            degeneracy = degeneracy.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for &(w, _) in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        (order, degeneracy)
    }

    pub fn degeneracy(&self) -> usize {
        self.elimination_order().1
    }

    /// Greedy proper coloring along the reversed elimination order; colors are
    /// `1..=k` with `k <= degeneracy + 1`.
    pub fn degeneracy_coloring(&self) -> Vec<usize> {
        let (order, _) = self.elimination_order();
        let mut color = vec![0usize; self.n];
        for &v in order.iter().rev() {
            let mut used: Vec<usize> = self.adj[v]
                .iter()
                .map(|&(w, _)| color[w])
                .filter(|&c| c > 0)
                .collect();
            used.sort_unstable();
            used.dedup();
            let mut c = 1;
            for u in used {
                if u == c {
                    c += 1;
                } else if u > c {
                    break;
                }
            }
            color[v] = c;
        }
        color
    }

    /// Canonical text serialization (edges in `(u, v)` order, no comments).
    pub fn canonical_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.m());
        for e in &self.edges {
            out.push_str(&format!("e {} {} {}\n", e.u, e.v, e.color as u8));
        }
        out
    }

    /// Serialization with leading comment lines.
    pub fn to_text_with_comments(&self, comments: &[&str]) -> String {
        let mut out: String = comments.iter().map(|c| format!("c {c}\n")).collect();
        out.push_str(&self.canonical_text());
        out
    }
}

impl fmt::Display for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl FromStr for ColoredGraph {
    type Err = GraphError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_graph(text)
    }
}

/// Parses the line-oriented `c` / `p n m` / `e u v color` format.
pub fn parse_graph(text: &str) -> Result<ColoredGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| GraphError::Parse { line, msg };
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err("second header".into()));
                }
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 2 {
                    return Err(err("expected `p <n> <m>`".into()));
                }
                let n = rest[0].parse().map_err(|_| err(format!("bad vertex count {:?}", rest[0])))?;
                let m = rest[1].parse().map_err(|_| err(format!("bad edge count {:?}", rest[1])))?;
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| err("edge before header".into()))?;
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 {
                    return Err(err("expected `e <u> <v> <color>`".into()));
                }
                let u: usize = rest[0].parse().map_err(|_| err(format!("bad vertex {:?}", rest[0])))?;
                let v: usize = rest[1].parse().map_err(|_| err(format!("bad vertex {:?}", rest[1])))?;
                let color = match rest[2] {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(format!("color {other:?} not in {{0,1}}"))),
                };
                for x in [u, v] {
                    if x >= n {
                        return Err(err(format!("vertex {x} out of range (n = {n})")));
                    }
                }
                if u == v {
                    return Err(err(format!("self-loop on vertex {u}")));
                }
                if let Some(prev) = seen.insert(key(u, v), line) {
                    return Err(err(format!("duplicate edge {u}-{v} (first on line {prev})")));
                }
                edges.push((u, v, color));
            }
            other => return Err(err(format!("unknown record type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing `p` header".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    ColoredGraph::new(n, edges)
}

/// An ordered list of vertex subsets.
#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct InversionSequence {
    pub sets: Vec<Vec<usize>>,
}

impl InversionSequence {
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let mut s = InversionSequence { sets };
        s.normalize();
        s
    }

    /// Sorts and deduplicates each set.
    pub fn normalize(&mut self) {
        for set in &mut self.sets {
            set.sort_unstable();
            set.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, mut set: Vec<usize>) {
        set.sort_unstable();
        set.dedup();
        self.sets.push(set);
    }

    pub fn extend(&mut self, other: InversionSequence) {
        self.sets.extend(other.sets);
    }

    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        for set in &self.sets {
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(())
    }

    /// Relabels every vertex through `map`.
    pub fn map_vertices<F: Fn(usize) -> usize>(&self, map: F) -> Self {
        InversionSequence::new(
            self.sets
                .iter()
                .map(|s| s.iter().map(|&v| map(v)).collect())
                .collect(),
        )
    }
}

/// A direction for every edge of a skeleton graph: `forward[i]` means edge `i`
/// (with `u < v`) is directed `u -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    skeleton: ColoredGraph,
    forward: Vec<bool>,
}

impl Orientation {
    pub fn new(skeleton: &ColoredGraph, forward: Vec<bool>) -> Result<Self, GraphError> {
        if forward.len() != skeleton.m() {
            return Err(GraphError::Invalid(format!(
                "{} directions for {} edges",
                forward.len(),
                skeleton.m()
            )));
        }
        Ok(Orientation {
            skeleton: skeleton.recolor(|_, _| false),
            forward,
        })
    }

    /// Builds an orientation from arcs `(tail, head)`; the arc set must be
    /// exactly the skeleton's edge set.
    pub fn from_arcs(skeleton: &ColoredGraph, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut forward = vec![None; skeleton.m()];
        for &(a, b) in arcs {
            let i = skeleton
                .edge_index(a, b)
                .ok_or_else(|| GraphError::Invalid(format!("arc {a}->{b} is not an edge")))?;
            if forward[i].replace(a < b).is_some() {
                return Err(GraphError::Invalid(format!("edge {a}-{b} directed twice")));
            }
        }
        let forward = forward
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GraphError::Invalid("some edge is not directed".into()))?;
        Self::new(skeleton, forward)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.skeleton
            .edges()
            .iter()
            .zip(&self.forward)
            .map(|(e, &f)| if f { (e.u, e.v) } else { (e.v, e.u) })
    }

    pub fn skeleton(&self) -> &ColoredGraph {
        &self.skeleton
    }
}

/// Colors each edge 0 when both orientations agree on it, 1 otherwise.
pub fn orientation_diff(o1: &Orientation, o2: &Orientation) -> Result<ColoredGraph, GraphError> {
    if o1.skeleton.n() != o2.skeleton.n()
        || o1.skeleton.edges().len() != o2.skeleton.edges().len()
        || o1
            .skeleton
            .edges()
            .iter()
            .zip(o2.skeleton.edges())
            .any(|(a, b)| (a.u, a.v) != (b.u, b.v))
    {
        return Err(GraphError::SkeletonMismatch);
    }
    Ok(o1.skeleton.recolor(|i, _| o1.forward[i] != o2.forward[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle(c: bool) -> ColoredGraph {
        ColoredGraph::complete(3, c)
    }

    #[test]
    fn parse_examples() {
        let g = parse_graph("p 2 1\ne 0 1 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.color(0, 1), Some(true));

        let g = parse_graph("c all zero\np 3 3\ne 0 1 0\ne 1 2 0\ne 0 2 0\n").unwrap();
        assert_eq!(g, triangle(false));

        let err = parse_graph("p 2 1\ne 0 0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p 2 1\ne 0 2 1\n", 2),
            ("p 3 2\ne 0 1 1\ne 1 0 0\n", 3),
            ("p 2 1\ne 0 1 2\n", 2),
            ("p 2 1\nx 0 1\n", 2),
            ("e 0 1 1\n", 1),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(GraphError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} -> {other:?}"),
            }
        }
        assert!(parse_graph("p 2 2\ne 0 1 1\n").is_err());
    }

    #[test]
    fn inversion_examples() {
        let g = ColoredGraph::path(&[true]);
        assert_eq!(g.apply_inversion(&[0, 1]).unwrap().color(0, 1), Some(false));
        assert_eq!(g.apply_inversion(&[0]).unwrap(), g);
        assert_eq!(triangle(true).apply_inversion(&[0, 1, 2]).unwrap(), triangle(false));
        assert!(g.apply_inversion(&[5]).is_err());
    }

    #[test]
    fn sequence_examples() {
        let p4 = ColoredGraph::path(&[true, false, true]);
        assert_eq!(p4.apply_sequence(&InversionSequence::default()).unwrap(), p4);
        let s = InversionSequence::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(p4.apply_sequence(&s).unwrap().is_all_zero());
        let e = ColoredGraph::path(&[true]);
        let twice = InversionSequence::new(vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(e.apply_sequence(&twice).unwrap(), e);
    }

    #[test]
    fn orientation_examples() {
        let k3 = triangle(false);
        let o1 = Orientation::new(&k3, vec![true, true, false]).unwrap();
        assert!(orientation_diff(&o1, &o1).unwrap().is_all_zero());
        let rev = Orientation::new(&k3, vec![false, false, true]).unwrap();
        assert_eq!(orientation_diff(&o1, &rev).unwrap(), triangle(true));

        let p3 = ColoredGraph::path(&[false, false]);
        let a = Orientation::from_arcs(&p3, &[(0, 1), (1, 2)]).unwrap();
        let b = Orientation::from_arcs(&p3, &[(0, 1), (2, 1)]).unwrap();
        let d = orientation_diff(&a, &b).unwrap();
        assert_eq!((d.color(0, 1), d.color(1, 2)), (Some(false), Some(true)));

        let other = Orientation::new(&ColoredGraph::path(&[false]), vec![true]).unwrap();
        assert_eq!(orientation_diff(&a, &other), Err(GraphError::SkeletonMismatch));
        assert!(Orientation::from_arcs(&p3, &[(0, 1)]).is_err());
    }

    #[test]
    fn girth_examples() {
        assert_eq!(triangle(false).girth(), Some(3));
        assert_eq!(ColoredGraph::cycle(&[false; 5]).girth(), Some(5));
        let tree = ColoredGraph::new(5, [(0, 1, true), (0, 2, false), (2, 3, true), (2, 4, false)]).unwrap();
        assert_eq!(tree.girth(), None);
        let c4_plus = ColoredGraph::new(6, [(0, 1, false), (1, 2, false), (2, 3, false), (3, 0, false), (3, 4, true), (4, 5, true), (5, 3, true)]).unwrap();
        assert_eq!(c4_plus.girth(), Some(3));
    }

    fn is_proper(g: &ColoredGraph, c: &[usize]) -> bool {
        g.edges().iter().all(|e| c[e.u] != c[e.v])
    }

    #[test]
    fn degeneracy_coloring_examples() {
        let k4 = ColoredGraph::complete(4, false);
        let c = k4.degeneracy_coloring();
        assert!(is_proper(&k4, &c));
        assert_eq!(c.iter().max(), Some(&4));

        let tree = ColoredGraph::new(6, [(0, 1, true), (0, 2, false), (2, 3, true), (2, 4, false), (4, 5, true)]).unwrap();
        let c = tree.degeneracy_coloring();
        assert!(is_proper(&tree, &c) && *c.iter().max().unwrap() <= 2);

        let c5 = ColoredGraph::cycle(&[true; 5]);
        let c = c5.degeneracy_coloring();
        assert!(is_proper(&c5, &c) && *c.iter().max().unwrap() <= 3);
    }

    fn arb_graph() -> impl Strategy<Value = ColoredGraph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (Just(n), Just(pairs), prop::collection::vec(0u8..3, m))
        })
        .prop_map(|(n, pairs, picks)| {
            let edges = pairs.into_iter().zip(picks).filter(|(_, p)| *p > 0).map(|((u, v), p)| (u, v, p == 2));
            ColoredGraph::new(n, edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph(&g.to_string()).unwrap(), g);
        }

        #[test]
        fn inversion_is_involution_and_counts(g in arb_graph(), mask in any::<u16>()) {
            let set: Vec<usize> = (0..g.n()).filter(|v| (mask >> v) & 1 == 1).collect();
            let once = g.apply_inversion(&set).unwrap();
            prop_assert_eq!(once.apply_inversion(&set).unwrap(), g.clone());
            let inside = g.edges().iter().filter(|e| set.contains(&e.u) && set.contains(&e.v)).count();
            let changed = g.edges().iter().zip(once.edges()).filter(|(a, b)| a.color != b.color).count();
            prop_assert_eq!(changed, inside);
        }

        #[test]
        fn sequence_order_independent(g in arb_graph(), masks in prop::collection::vec(any::<u16>(), 0..5)) {
            let sets: Vec<Vec<usize>> = masks.iter().map(|m| (0..g.n()).filter(|v| (m >> v) & 1 == 1).collect()).collect();
            let mut rev = sets.clone();
            rev.reverse();
            let a = g.apply_sequence(&InversionSequence::new(sets.clone())).unwrap();
            let b = g.apply_sequence(&InversionSequence::new(rev)).unwrap();
            let mut folded = g.clone();
            for s in &sets { folded = folded.apply_inversion(s).unwrap(); }
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a, folded);
        }

        #[test]
        fn orientation_diff_symmetric(g in arb_graph(), m1 in any::<u64>(), m2 in any::<u64>()) {
            let dirs = |m: u64| (0..g.m()).map(|i| (m >> i) & 1 == 1).collect::<Vec<_>>();
            let o1 = Orientation::new(&g, dirs(m1)).unwrap();
            let o2 = Orientation::new(&g, dirs(m2)).unwrap();
            prop_assert_eq!(orientation_diff(&o1, &o2).unwrap(), orientation_diff(&o2, &o1).unwrap());
        }

        #[test]
        fn degeneracy_coloring_proper(g in arb_graph()) {
            let c = g.degeneracy_coloring();
            prop_assert!(is_proper(&g, &c));
            prop_assert!(*c.iter().max().unwrap_or(&0) <= g.degeneracy() + 1);
        }
    }
}
