//! Exact t-inversion search.
//!
//! [`find_inversion`] decides whether a colored graph admits an assignment of
//! `F₂^t` vectors with `u·v = π(uv)` on every edge, optionally under
//! strictness, fixed-weight, fixed-vertex, domain and disequality restrictions.
//! [`norm`] and [`diameter`] are built on top of it.

mod diameter;
mod search;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{F2Vector, MAX_DIM};
use crate::graph::{ColoredGraph, GraphError, InversionSequence};

pub use diameter::{diameter, DiameterError, DiameterOptions, DiameterResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("dimension {0} exceeds 64")]
    DimTooLarge(usize),
    #[error("vector for vertex {vertex} has dimension {got}, expected {expected}")]
    VectorDim { vertex: usize, got: usize, expected: usize },
    #[error("{0} domains for {1} vertices")]
    DomainCount(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertex -> vector map of a common dimension `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    t: usize,
    vectors: Vec<F2Vector>,
}

impl Assignment {
    pub fn new(t: usize, vectors: Vec<F2Vector>) -> Result<Self, SolveError> {
        if t > MAX_DIM {
            return Err(SolveError::DimTooLarge(t));
        }
        for (vertex, x) in vectors.iter().enumerate() {
            if x.dim() != t {
                return Err(SolveError::VectorDim {
                    vertex,
                    got: x.dim(),
                    expected: t,
                });
            }
        }
        Ok(Assignment { t, vectors })
    }

    pub fn from_bitstrings<S: AsRef<str>>(t: usize, strings: &[S]) -> Result<Self, SolveError> {
        let vectors = strings
            .iter()
            .map(|s| F2Vector::from_bitstring(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SolveError::DimTooLarge(t))?;
        Self::new(t, vectors)
    }

    pub fn zero(n: usize, t: usize) -> Self {
        Assignment {
            t,
            vectors: vec![F2Vector::zero(t); n],
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[F2Vector] {
        &self.vectors
    }

    pub fn get(&self, v: usize) -> F2Vector {
        self.vectors[v]
    }

    /// True when every edge satisfies `u·v = π(uv)`.
    pub fn satisfies(&self, g: &ColoredGraph) -> bool {
        self.vectors.len() == g.n()
            && g
                .edges()
                .iter()
                .all(|e| self.vectors[e.u].dot(&self.vectors[e.v]) == e.color)
    }

    /// Appends zero coordinates up to dimension `t`.
    pub fn padded(&self, t: usize) -> Self {
        Assignment {
            t,
            vectors: self.vectors.iter().map(|x| x.padded(t)).collect(),
        }
    }

    /// One set per coordinate: `X_i = {u : coordinate i of u is 1}`.
    pub fn to_sequence(&self) -> InversionSequence {
        InversionSequence::new(
            (0..self.t)
                .map(|i| {
                    (0..self.vectors.len())
                        .filter(|&u| self.vectors[u].get(i))
                        .collect()
                })
                .collect(),
        )
    }
}

/// Coordinate-wise view of an assignment as inversion sets.
pub fn sequence_from_assignment(a: &Assignment) -> InversionSequence {
    a.to_sequence()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    #[serde(with = "opt_secs")]
    pub max_time: Option<Duration>,
}

mod opt_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.map(Duration::from_secs_f64))
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            max_nodes: Some(n),
            max_time: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Every vector nonzero.
    pub strict: bool,
    /// Every vector of exactly this weight.
    pub weight_exact: Option<u32>,
    pub fixed: BTreeMap<usize, F2Vector>,
    /// Optional explicit allowed set per vertex (`None` = unrestricted).
    pub domains: Option<Vec<Option<Vec<F2Vector>>>>,
    /// Pairs that must receive distinct vectors.
    pub disequalities: Vec<(usize, usize)>,
    pub budget: Budget,
    /// Worker threads for root branching; 1 = sequential.
    pub jobs: usize,
    /// Allow coordinate-permutation symmetry breaking when it is sound.
    pub symmetry: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strict: false,
            weight_exact: None,
            fixed: BTreeMap::new(),
            domains: None,
            disequalities: Vec::new(),
            budget: Budget::default(),
            jobs: 1,
            symmetry: true,
        }
    }
}

impl SolveOptions {
    pub fn strict() -> Self {
        SolveOptions {
            strict: true,
            ..Default::default()
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn fix(mut self, v: usize, x: F2Vector) -> Self {
        self.fixed.insert(v, x);
        self
    }

    /// Same domain for every vertex.
    pub fn uniform_domain(mut self, n: usize, allowed: Vec<F2Vector>) -> Self {
        self.domains = Some(vec![Some(allowed); n]);
        self
    }

    pub fn domain_of(&self, v: usize) -> Option<&[F2Vector]> {
        self.domains
            .as_ref()
            .and_then(|d| d.get(v))
            .and_then(|d| d.as_deref())
    }

    /// True when `x` passes the strict, weight and domain restrictions of `v`
    /// (fixed vectors and disequalities excluded).
    pub fn allows(&self, v: usize, x: &F2Vector) -> bool {
        if self.strict && x.is_zero() {
            return false;
        }
        if let Some(w) = self.weight_exact {
            if x.weight() != w {
                return false;
            }
        }
        match self.domain_of(v) {
            Some(d) => d.contains(x),
            None => true,
        }
    }

    /// Serializable summary for certificates.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "strict": self.strict,
            "weight_exact": self.weight_exact,
            "fixed": self.fixed.iter().map(|(v, x)| (v.to_string(), x.to_bitstring())).collect::<BTreeMap<_, _>>(),
            "restricted_domains": self.domains.as_ref().map(|d| d.iter().filter(|x| x.is_some()).count()),
            "disequalities": self.disequalities,
            "budget": self.budget,
            "symmetry": self.symmetry,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat { exhaustive: bool },
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub nodes: u64,
    /// Whether root symmetry breaking was applied (recorded for certificates).
    pub symmetry_breaking: bool,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self.outcome, Outcome::Sat(_))
    }

    pub fn is_exhaustive_unsat(&self) -> bool {
        matches!(self.outcome, Outcome::Unsat { exhaustive: true })
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match &self.outcome {
            Outcome::Sat(a) => Some(a),
            _ => None,
        }
    }
}

/// Checks edges and every restriction in `opts`.
pub fn verify_assignment(g: &ColoredGraph, a: &Assignment, opts: &SolveOptions) -> bool {
    if !a.satisfies(g) {
        return false;
    }
    if (0..g.n()).any(|v| !opts.allows(v, &a.get(v))) {
        return false;
    }
    if opts
        .fixed
        .iter()
        .any(|(&v, x)| v >= g.n() || a.get(v) != *x)
    {
        return false;
    }
    opts.disequalities
        .iter()
        .all(|&(u, v)| u < g.n() && v < g.n() && a.get(u) != a.get(v))
}

/// Decides whether `g` admits a `t`-inversion satisfying `opts`.
pub fn find_inversion(g: &ColoredGraph, t: usize, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if t > MAX_DIM {
        return Err(SolveError::DimTooLarge(t));
    }
    for (&v, x) in &opts.fixed {
        g.check_vertex(v)?;
        if x.dim() != t {
            return Err(SolveError::VectorDim {
                vertex: v,
                got: x.dim(),
                expected: t,
            });
        }
    }
    if let Some(d) = &opts.domains {
        if d.len() != g.n() {
            return Err(SolveError::DomainCount(d.len(), g.n()));
        }
        for (v, list) in d.iter().enumerate() {
            if let Some(x) = list.iter().flatten().find(|x| x.dim() != t) {
                return Err(SolveError::VectorDim {
                    vertex: v,
                    got: x.dim(),
                    expected: t,
                });
            }
        }
    }
    for &(u, v) in &opts.disequalities {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
    }
    let result = search::run(g, t, opts);
    if let Outcome::Sat(a) = &result.outcome {
        assert!(
            verify_assignment(g, a, opts),
            "solver produced an assignment that does not verify"
        );
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormResult {
    pub norm: usize,
    pub witness: Assignment,
    pub nodes: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormError {
    #[error("no t-inversion with t <= {0}")]
    ExceedsCap(usize),
    #[error("budget exceeded at t = {0}")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Smallest `t <= t_cap` admitting a `t`-inversion, scanning upward from 0.
pub fn norm(g: &ColoredGraph, t_cap: usize) -> Result<NormResult, NormError> {
    norm_with(g, t_cap, &SolveOptions::default())
}

pub fn norm_with(g: &ColoredGraph, t_cap: usize, opts: &SolveOptions) -> Result<NormResult, NormError> {
    norm_from(g, 0, t_cap, opts)
}

/// Like [`norm_with`] but starts the scan at `t_start`; the caller asserts no
/// smaller `t` works.
pub(crate) fn norm_from(
    g: &ColoredGraph,
    t_start: usize,
    t_cap: usize,
    opts: &SolveOptions,
) -> Result<NormResult, NormError> {
    let mut nodes = 0;
    for t in t_start..=t_cap {
        let r = find_inversion(g, t, opts)?;
        nodes += r.nodes;
        match r.outcome {
            Outcome::Sat(witness) => return Ok(NormResult { norm: t, witness, nodes }),
            Outcome::Unsat { .. } => {}
            Outcome::BudgetExceeded => return Err(NormError::BudgetExceeded(t)),
        }
    }
    Err(NormError::ExceedsCap(t_cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> F2Vector {
        F2Vector::from_bitstring(s).unwrap()
    }

    #[test]
    fn verify_examples() {
        let e = ColoredGraph::path(&[true]);
        let opts = SolveOptions::default();
        assert!(verify_assignment(&e, &Assignment::from_bitstrings(1, &["1", "1"]).unwrap(), &opts));
        assert!(!verify_assignment(&e, &Assignment::from_bitstrings(1, &["1", "0"]).unwrap(), &opts));
    }

    #[test]
    fn verify_checks_every_restriction() {
        let e = ColoredGraph::path(&[false]);
        let a = Assignment::from_bitstrings(2, &["10", "01"]).unwrap();
        assert!(verify_assignment(&e, &a, &SolveOptions::strict()));
        let z = Assignment::from_bitstrings(2, &["00", "01"]).unwrap();
        assert!(verify_assignment(&e, &z, &SolveOptions::default()));
        assert!(!verify_assignment(&e, &z, &SolveOptions::strict()));
        let w2 = SolveOptions { weight_exact: Some(2), ..Default::default() };
        assert!(!verify_assignment(&e, &a, &w2));
        assert!(!verify_assignment(&e, &a, &SolveOptions::default().fix(0, v("11"))));
        let same = Assignment::from_bitstrings(2, &["10", "10"]).unwrap();
        assert!(!verify_assignment(&ColoredGraph::path(&[true]), &same, &SolveOptions { disequalities: vec![(0, 1)], ..Default::default() }));
        let dom = SolveOptions::default().uniform_domain(2, vec![v("10")]);
        assert!(!verify_assignment(&e, &a, &dom));
    }

    #[test]
    fn find_examples() {
        let e = ColoredGraph::path(&[true]);
        assert!(find_inversion(&e, 0, &SolveOptions::default()).unwrap().is_exhaustive_unsat());
        let k3 = ColoredGraph::complete(3, false);
        let r = find_inversion(&k3, 1, &SolveOptions::default()).unwrap();
        assert!(r.is_sat());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&ColoredGraph::complete(4, false), 8).unwrap().norm, 0);
        assert_eq!(norm(&ColoredGraph::path(&[true]), 8).unwrap().norm, 1);
        let p4 = ColoredGraph::path(&[true, false, true]);
        let r = norm(&p4, 8).unwrap();
        assert_eq!(r.norm, 2);
        // no single set zeroes P4 (1,0,1): enumerate all 16 subsets
        for mask in 0u32..16 {
            let set: Vec<usize> = (0..4).filter(|i| (mask >> i) & 1 == 1).collect();
            assert!(!p4.apply_inversion(&set).unwrap().is_all_zero());
        }
        assert_eq!(norm(&ColoredGraph::complete(3, true), 8).unwrap().norm, 1);
        assert_eq!(norm(&ColoredGraph::path(&[true]), 0), Err(NormError::ExceedsCap(0)));
    }

    #[test]
    fn sequence_examples() {
        let a = Assignment::from_bitstrings(1, &["1", "1"]).unwrap();
        assert_eq!(a.to_sequence().sets, vec![vec![0, 1]]);
        let z = Assignment::zero(3, 2);
        assert_eq!(z.to_sequence().sets, vec![Vec::<usize>::new(), vec![]]);
        let p4 = ColoredGraph::path(&[true, false, true]);
        let a = Assignment::from_bitstrings(2, &["10", "10", "01", "01"]).unwrap();
        let s = sequence_from_assignment(&a);
        assert_eq!(s.sets, vec![vec![0, 1], vec![2, 3]]);
        assert!(p4.apply_sequence(&s).unwrap().is_all_zero());
    }

    #[test]
    fn fixed_vector_outside_domain_is_unsat() {
        let e = ColoredGraph::path(&[true]);
        let opts = SolveOptions::strict().fix(0, v("00"));
        assert!(find_inversion(&e, 2, &opts).unwrap().is_exhaustive_unsat());
    }

    #[test]
    fn bad_inputs_are_errors() {
        let e = ColoredGraph::path(&[true]);
        assert!(find_inversion(&e, 65, &SolveOptions::default()).is_err());
        assert!(find_inversion(&e, 2, &SolveOptions::default().fix(0, v("1"))).is_err());
        assert!(find_inversion(&e, 2, &SolveOptions::default().fix(7, v("10"))).is_err());
    }

    #[test]
    fn zero_budget_is_reported() {
        let k4 = ColoredGraph::complete(4, true);
        let r = find_inversion(&k4, 3, &SolveOptions::default().with_budget(Budget::nodes(0))).unwrap();
        assert_eq!(r.outcome, Outcome::BudgetExceeded);
    }

    mod oracle {
        use super::super::*;
        use proptest::prelude::*;
        use std::collections::{HashMap, VecDeque};

        /// Tries every assignment of `F₂^t` vectors.
        fn brute_force(g: &ColoredGraph, t: usize, opts: &SolveOptions) -> bool {
            let n = g.n();
            let q = 1u64 << t;
            let total = q.pow(n as u32);
            (0..total).any(|code| {
                let vectors = (0..n)
                    .map(|i| F2Vector::truncated(t, code / q.pow(i as u32) % q))
                    .collect();
                verify_assignment(g, &Assignment { t, vectors }, opts)
            })
        }

        /// Minimal number of single-set inversions reaching all-0, by BFS.
        fn bfs_norm(g: &ColoredGraph) -> usize {
            let n = g.n();
            let flips: Vec<u64> = (0u64..1 << n)
                .map(|x| {
                    g.edges()
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| x >> e.u & 1 == 1 && x >> e.v & 1 == 1)
                        .fold(0, |acc, (i, _)| acc | 1 << i)
                })
                .collect();
            let start = g.color_mask();
            let mut dist = HashMap::from([(start, 0usize)]);
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                if c == 0 {
                    return dist[&c];
                }
                for f in &flips {
                    let d = c ^ f;
                    if !dist.contains_key(&d) {
                        dist.insert(d, dist[&c] + 1);
                        queue.push_back(d);
                    }
                }
            }
            unreachable!("all-0 is reachable")
        }

        fn arb_graph(max_n: usize) -> impl Strategy<Value = ColoredGraph> {
            (1..=max_n).prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let m = pairs.len();
                (Just(pairs), proptest::collection::vec(0u8..3, m)).prop_map(move |(pairs, codes)| {
                    let edges = pairs.iter().zip(codes).filter(|(_, c)| *c > 0).map(|(&(u, v), c)| (u, v, c == 2));
                    ColoredGraph::new(n, edges).unwrap()
                })
            })
        }

        fn arb_options(n: usize, t: usize) -> impl Strategy<Value = SolveOptions> {
            (
                any::<bool>(),
                prop::option::of(0..=t as u32),
                prop::option::of((0..n, 0u64..1 << t)),
                proptest::collection::vec((0..n, 0..n), 0..3),
                prop::option::of(proptest::collection::vec(0u64..1 << t, 1..5)),
            )
                .prop_map(move |(strict, weight_exact, fixed, diseq, dom)| {
                    let mut o = SolveOptions { strict, weight_exact, ..Default::default() };
                    if let Some((v, x)) = fixed {
                        o.fixed.insert(v, F2Vector::truncated(t, x));
                    }
                    o.disequalities = diseq.into_iter().filter(|(a, b)| a != b).collect();
                    if let Some(d) = dom {
                        let mut doms = vec![None; n];
                        doms[0] = Some(d.into_iter().map(|x| F2Vector::truncated(t, x)).collect());
                        o.domains = Some(doms);
                    }
                    o
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(300))]

            #[test]
            fn agrees_with_brute_force(
                (g, t, opts) in arb_graph(4).prop_flat_map(|g| {
                    let n = g.n();
                    (Just(g), 0usize..=3).prop_flat_map(move |(g, t)| (Just(g), Just(t), arb_options(n, t)))
                })
            ) {
                prop_assume!(g.m() <= 6);
                let r = find_inversion(&g, t, &opts).unwrap();
                prop_assert_eq!(r.is_sat(), brute_force(&g, t, &opts));
                if !r.is_sat() {
                    prop_assert!(r.is_exhaustive_unsat());
                }
            }

            #[test]
            fn norm_is_minimal_sequence_length(g in arb_graph(5)) {
                let r = norm(&g, 10).unwrap();
                prop_assert_eq!(r.norm, bfs_norm(&g));
                let seq = sequence_from_assignment(&r.witness);
                prop_assert!(g.apply_sequence(&seq).unwrap().is_all_zero());
            }

            #[test]
            fn feasibility_is_monotone_in_t(g in arb_graph(6)) {
                let r = norm(&g, 12).unwrap();
                for t in r.norm..=r.norm + 2 {
                    prop_assert!(find_inversion(&g, t, &SolveOptions::default()).unwrap().is_sat());
                }
                let padded = r.witness.padded(r.norm + 1);
                prop_assert!(padded.satisfies(&g));
            }

            #[test]
            fn parallel_and_symmetry_variants_agree(g in arb_graph(7), t in 0usize..4, strict in any::<bool>()) {
                let base = SolveOptions { strict, ..Default::default() };
                let seq = find_inversion(&g, t, &base).unwrap();
                let par = find_inversion(&g, t, &SolveOptions { jobs: 3, ..base.clone() }).unwrap();
                let nosym = find_inversion(&g, t, &SolveOptions { symmetry: false, ..base }).unwrap();
                prop_assert_eq!(seq.is_sat(), nosym.is_sat());
                prop_assert_eq!(&seq.outcome, &par.outcome);
            }
        }
    }
}
