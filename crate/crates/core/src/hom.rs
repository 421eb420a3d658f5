//! Color-preserving homomorphisms between 2-edge-colored graphs.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::ColoredGraph;
use crate::solver::{Assignment, Budget};

/// `map[g_vertex] = h_vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMap {
    pub map: Vec<usize>,
}

impl HomMap {
    pub fn identity(n: usize) -> Self {
        HomMap { map: (0..n).collect() }
    }

    pub fn to_json(&self) -> String {
        let obj: BTreeMap<String, usize> = self.map.iter().enumerate().map(|(g, &h)| (g.to_string(), h)).collect();
        serde_json::to_string(&obj).expect("plain map")
    }

    pub fn from_json(text: &str) -> Result<Self, HomError> {
        let obj: BTreeMap<String, usize> = serde_json::from_str(text).map_err(|e| HomError::Json(e.to_string()))?;
        let mut map = vec![None; obj.len()];
        for (k, h) in obj {
            let g: usize = k.parse().map_err(|_| HomError::Json(format!("bad vertex key {k:?}")))?;
            *map.get_mut(g).ok_or_else(|| HomError::Json(format!("vertex {g} out of range")))? = Some(h);
        }
        let map = map.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| HomError::Json("map is not total".into()))?;
        Ok(HomMap { map })
    }
}

impl Serialize for HomMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let obj: BTreeMap<String, usize> = self.map.iter().enumerate().map(|(g, &h)| (g.to_string(), h)).collect();
        obj.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        HomMap::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("homomorphism JSON: {0}")]
    Json(String),
    #[error("map is not a homomorphism")]
    NotHom,
    #[error("assignment does not verify on the target")]
    BadAssignment,
}

/// True iff `f` is total on `G`, lands in `H`, and every edge of `G` maps to
/// an edge of `H` of the same color.
pub fn verify_hom(g: &ColoredGraph, h: &ColoredGraph, f: &HomMap) -> bool {
    f.map.len() == g.n()
        && f.map.iter().all(|&x| x < h.n())
        && g.edges().iter().all(|e| h.color(f.map[e.u], f.map[e.v]) == Some(e.color))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomResult {
    Found(HomMap),
    None,
    BudgetExceeded,
}

/// Backtracking over `G`'s vertices, most-constrained first; each candidate
/// image is checked exactly against the already mapped neighbors.
pub fn find_hom(g: &ColoredGraph, h: &ColoredGraph, budget: Budget) -> HomResult {
    let search = HomSearch {
        g,
        h,
        nodes: AtomicU64::new(0),
        budget,
        start: std::time::Instant::now(),
    };
    let mut map = vec![None; g.n()];
    match search.dfs(&mut map, g.n()) {
        Some(true) => {
            let f = HomMap {
                map: map.into_iter().map(|x| x.expect("total")).collect(),
            };
            assert!(verify_hom(g, h, &f), "search produced a non-homomorphism");
            HomResult::Found(f)
        }
        Some(false) => HomResult::None,
        None => HomResult::BudgetExceeded,
    }
}

struct HomSearch<'a> {
    g: &'a ColoredGraph,
    h: &'a ColoredGraph,
    nodes: AtomicU64,
    budget: Budget,
    start: std::time::Instant,
}

impl HomSearch<'_> {
    fn over_budget(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        self.budget.max_nodes.is_some_and(|m| n > m) || self.budget.max_time.is_some_and(|d| self.start.elapsed() >= d)
    }

    fn candidates(&self, map: &[Option<usize>], v: usize) -> Vec<usize> {
        let mut mapped = self.g.neighbors(v).iter().filter_map(|&(w, c)| map[w].map(|x| (x, c)));
        match mapped.next() {
            None => (0..self.h.n()).collect(),
            Some((x, c)) => self
                .h
                .neighbors(x)
                .iter()
                .filter(|&&(_, d)| d == c)
                .map(|&(y, _)| y)
                .filter(|&y| mapped.clone().all(|(z, e)| self.h.color(y, z) == Some(e)))
                .collect(),
        }
    }

    /// `Some(true)` = complete map found, `Some(false)` = exhausted, `None` = budget.
    fn dfs(&self, map: &mut Vec<Option<usize>>, unmapped: usize) -> Option<bool> {
        if unmapped == 0 {
            return Some(true);
        }
        let v = (0..self.g.n())
            .filter(|&v| map[v].is_none())
            .min_by_key(|&v| {
                let mapped = self.g.neighbors(v).iter().filter(|(w, _)| map[*w].is_some()).count();
                (Reverse(mapped), Reverse(self.g.degree(v)), v)
            })
            .expect("unmapped vertex");
        for y in self.candidates(map, v) {
            if self.over_budget() {
                return None;
            }
            map[v] = Some(y);
            match self.dfs(map, unmapped - 1) {
                Some(false) => {}
                other => return other,
            }
            map[v] = None;
        }
        Some(false)
    }
}

/// Pulls an assignment of `H` back along `f`.
pub fn hom_lift(g: &ColoredGraph, h: &ColoredGraph, a: &Assignment, f: &HomMap) -> Result<Assignment, HomError> {
    if !verify_hom(g, h, f) {
        return Err(HomError::NotHom);
    }
    if !a.satisfies(h) {
        return Err(HomError::BadAssignment);
    }
    let lifted = Assignment::new(a.t(), f.map.iter().map(|&x| a.get(x)).collect()).expect("same dimension");
    debug_assert!(lifted.satisfies(g));
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::norm;
    use crate::targets::{builtin, paley, Builtin};
    use proptest::prelude::*;

    #[test]
    fn verify_examples() {
        let k3 = ColoredGraph::complete(3, false);
        assert!(verify_hom(&k3, &k3, &HomMap::identity(3)));
        let e = ColoredGraph::path(&[false]);
        assert!(!verify_hom(&e, &e, &HomMap { map: vec![0, 0] }));
        // G2 path: center 0 with a 0-edge to 1 and a 1-edge to 2
        let g2 = ColoredGraph::new(3, [(0, 1, false), (0, 2, true)]).unwrap();
        let sp5 = paley(5).unwrap();
        assert!(verify_hom(&g2, &sp5, &HomMap { map: vec![0, 2, 1] }));
    }

    #[test]
    fn find_examples() {
        let zero_edge = ColoredGraph::path(&[false]);
        assert_eq!(find_hom(&ColoredGraph::complete(3, false), &zero_edge, Budget::default()), HomResult::None);
        let both = ColoredGraph::path(&[false, true]);
        for c in [false, true] {
            assert!(matches!(find_hom(&ColoredGraph::path(&[c]), &both, Budget::default()), HomResult::Found(_)));
        }
        let sp5 = paley(5).unwrap();
        let HomResult::Found(f) = find_hom(&sp5.complemented(), &sp5, Budget::default()) else { panic!("autodual") };
        let mut image = f.map.clone();
        image.sort();
        assert_eq!(image, vec![0, 1, 2, 3, 4]);
        assert_eq!(find_hom(&sp5, &sp5, Budget::nodes(0)), HomResult::BudgetExceeded);
    }

    #[test]
    fn json_round_trip() {
        let f = HomMap { map: vec![2, 0, 1] };
        assert_eq!(f.to_json(), r#"{"0":2,"1":0,"2":1}"#);
        assert_eq!(HomMap::from_json(&f.to_json()).unwrap(), f);
        assert!(HomMap::from_json(r#"{"0":1,"2":0}"#).is_err());
    }

    #[test]
    fn lift_examples() {
        let Builtin::Witness { graph: sp5, assignment } = builtin("sp5_witness").unwrap() else { panic!() };
        let id = HomMap::identity(5);
        assert_eq!(hom_lift(&sp5, &sp5, &assignment, &id).unwrap(), assignment);
        let one = ColoredGraph::path(&[true]);
        let lifted = hom_lift(&one, &sp5, &assignment, &HomMap { map: vec![0, 1] }).unwrap();
        assert!(lifted.get(0).dot(&lifted.get(1)));
        let zero = ColoredGraph::complete(2, false);
        let lifted = hom_lift(&zero, &sp5, &assignment, &HomMap { map: vec![0, 2] }).unwrap();
        assert!(!lifted.get(0).dot(&lifted.get(1)));
        assert_eq!(hom_lift(&one, &sp5, &assignment, &HomMap { map: vec![0, 2] }), Err(HomError::NotHom));
    }

    fn arb_graph(max_n: usize, p: f64) -> impl Strategy<Value = ColoredGraph> {
        (1..=max_n, any::<u64>()).prop_map(move |(n, seed)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v, rng.gen_bool(0.5)));
                    }
                }
            }
            ColoredGraph::new(n, edges).unwrap()
        })
    }

    fn brute_force_hom(g: &ColoredGraph, h: &ColoredGraph) -> bool {
        let total = h.n().pow(g.n() as u32);
        (0..total).any(|code| {
            let map = (0..g.n()).map(|i| code / h.n().pow(i as u32) % h.n()).collect();
            verify_hom(g, h, &HomMap { map })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn complete_against_enumeration(g in arb_graph(5, 0.5), h in arb_graph(5, 0.6)) {
            let r = find_hom(&g, &h, Budget::default());
            prop_assert_eq!(matches!(r, HomResult::Found(_)), brute_force_hom(&g, &h));
        }

        #[test]
        fn complete_on_lopsided_sizes(g in arb_graph(8, 0.3), h in arb_graph(3, 0.9), g2 in arb_graph(4, 0.6), h2 in arb_graph(20, 0.2)) {
            for (g, h) in [(&g, &h), (&g2, &h2)] {
                let r = find_hom(g, h, Budget::default());
                prop_assert_eq!(matches!(r, HomResult::Found(_)), brute_force_hom(g, h));
            }
        }

        #[test]
        fn norm_is_monotone_along_homs(g in arb_graph(6, 0.5), h in arb_graph(6, 0.7)) {
            if let HomResult::Found(f) = find_hom(&g, &h, Budget::default()) {
                let nh = norm(&h, 10).unwrap();
                prop_assert!(norm(&g, 10).unwrap().norm <= nh.norm);
                let lifted = hom_lift(&g, &h, &nh.witness, &f).unwrap();
                prop_assert!(lifted.satisfies(&g));
            }
        }
    }
}
