//! Zielonka graphs `SZ_k` and their subgraphs `(G_k, σ_k)`.

use std::collections::HashMap;
use std::fmt;

use super::TargetError;
use crate::graph::ColoredGraph;

pub const MAX_K: usize = 6;

/// Vertex `(i, α)` with parts numbered from 1 and `α_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZielonkaVertex {
    pub part: usize,
    pub signs: Vec<i8>,
}

impl ZielonkaVertex {
    pub fn new(part: usize, signs: Vec<i8>) -> Result<Self, TargetError> {
        let k = signs.len();
        let ok = (1..=k).contains(&part)
            && signs
                .iter()
                .enumerate()
                .all(|(j, &s)| if j + 1 == part { s == 0 } else { s == 1 || s == -1 });
        if ok {
            Ok(ZielonkaVertex { part, signs })
        } else {
            Err(TargetError::BadVertex(format!("({part}, {signs:?})")))
        }
    }

    pub fn k(&self) -> usize {
        self.signs.len()
    }

    /// `α_j` with `j` counted from 1.
    pub fn sign(&self, j: usize) -> i8 {
        self.signs[j - 1]
    }

    /// Color of the edge to `other`, `None` inside a part.
    pub fn color_to(&self, other: &ZielonkaVertex) -> Option<bool> {
        if self.part == other.part {
            return None;
        }
        Some(self.sign(other.part) * other.sign(self.part) == -1)
    }

    /// `-u`: every sign negated.
    pub fn negated(&self) -> Self {
        ZielonkaVertex {
            part: self.part,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// The isomorphism negating every coordinate after the part index.
    pub fn phi(&self) -> Self {
        ZielonkaVertex {
            part: self.part,
            signs: self
                .signs
                .iter()
                .enumerate()
                .map(|(j, &s)| if j + 1 > self.part { -s } else { s })
                .collect(),
        }
    }

    /// Embeds a vertex of `SZ_{k-1}` into `SZ_k`: parts shift up by one and a
    /// leading `+1` coordinate is prepended.
    pub fn shifted_up(&self) -> Self {
        let mut signs = vec![1];
        signs.extend(&self.signs);
        ZielonkaVertex {
            part: self.part + 1,
            signs,
        }
    }
}

impl fmt::Display for ZielonkaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.part)?;
        for &s in &self.signs {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

/// `SZ_k` with its vertex labels; vertex ids run part by part.
#[derive(Debug, Clone)]
pub struct Zielonka {
    pub k: usize,
    pub graph: ColoredGraph,
    pub vertices: Vec<ZielonkaVertex>,
    index: HashMap<ZielonkaVertex, usize>,
}

impl Zielonka {
    pub fn id(&self, v: &ZielonkaVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Vertices of `G_k` in id order.
    pub fn gk_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| in_gk(&self.vertices[v]))
            .collect()
    }
}

/// Membership in `G_k`: `α_j = 1` for every `j ∈ [min(i+1, k)] ∖ {i}`.
pub fn in_gk(v: &ZielonkaVertex) -> bool {
    let top = (v.part + 1).min(v.k());
    (1..=top).filter(|&j| j != v.part).all(|j| v.sign(j) == 1)
}

pub fn zielonka(k: usize) -> Result<Zielonka, TargetError> {
    if !(1..=MAX_K).contains(&k) {
        return Err(TargetError::OutOfRange(format!("zielonka needs 1 <= k <= {MAX_K}, got {k}")));
    }
    let mut vertices = Vec::with_capacity(k << (k - 1));
    for part in 1..=k {
        for pattern in 0u32..1 << (k - 1) {
            let mut bits = (0..k - 1).map(|b| if pattern >> b & 1 == 1 { -1 } else { 1 });
            let signs = (1..=k).map(|j| if j == part { 0 } else { bits.next().expect("k-1 signs") }).collect();
            vertices.push(ZielonkaVertex { part, signs });
        }
    }
    let mut edges = Vec::new();
    for (a, u) in vertices.iter().enumerate() {
        for (b, v) in vertices.iter().enumerate().skip(a + 1) {
            if let Some(c) = u.color_to(v) {
                edges.push((a, b, c));
            }
        }
    }
    let labels = vertices.iter().map(ToString::to_string).collect();
    let graph = ColoredGraph::new(vertices.len(), edges)
        .and_then(|g| g.with_labels(labels))
        .expect("zielonka graph is simple");
    let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    Ok(Zielonka { k, graph, vertices, index })
}

/// `(G_k, σ_k)` with the ids of its vertices in `SZ_k`.
pub fn gk_sigma(k: usize) -> Result<(ColoredGraph, Vec<usize>), TargetError> {
    if k < 3 {
        return Err(TargetError::OutOfRange(format!("gk_sigma needs k >= 3, got {k}")));
    }
    let z = zielonka(k)?;
    let keep = z.gk_vertices();
    let (g, map) = z.graph.induced(&keep).expect("ids in range");
    Ok((g, map))
}
