//! Backtracking core. Each unassigned vertex keeps an echelon system of the
//! dot constraints imposed by its assigned neighbors; rows are undone through
//! a trail.

use std::cmp::Reverse;
use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{Assignment, Outcome, SolveOptions, SolveResult};
use crate::f2::{mask, parity, F2Vector};
use crate::graph::ColoredGraph;

const FORWARD_CHECK_LIMIT: u64 = 256;

#[derive(Clone, Copy, Debug)]
struct Row {
    coef: u64,
    rhs: bool,
    pivot: u32,
}

#[derive(Clone)]
struct State {
    vals: Vec<Option<u64>>,
    rows: Vec<Vec<Row>>,
    trail: Vec<usize>,
    unassigned: usize,
}

enum Step {
    Sat,
    Unsat,
    Abort,
}

struct Ctx<'a> {
    g: &'a ColoredGraph,
    t: usize,
    full: u64,
    strict: bool,
    weight: Option<u32>,
    domains: Vec<Option<Vec<u64>>>,
    domain_sets: Vec<Option<HashSet<u64>>>,
    diseq: Vec<Vec<usize>>,
    restricted: Vec<bool>,
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    out_of_budget: AtomicBool,
    best_root: AtomicUsize,
}

pub(super) fn run(g: &ColoredGraph, t: usize, opts: &SolveOptions) -> SolveResult {
    let n = g.n();
    let full = mask(t);
    let allowed_bits = |x: u64| -> bool {
        (!opts.strict || x != 0) && opts.weight_exact.map_or(true, |w| x.count_ones() == w)
    };
    let domains: Vec<Option<Vec<u64>>> = (0..n)
        .map(|v| {
            opts.domain_of(v).map(|d| {
                let mut list: Vec<u64> = d.iter().map(F2Vector::bits).filter(|&x| allowed_bits(x)).collect();
                list.sort_unstable();
                list.dedup();
                list
            })
        })
        .collect();
    let domain_sets = domains
        .iter()
        .map(|d| d.as_ref().map(|l| l.iter().copied().collect()))
        .collect();
    let mut diseq = vec![Vec::new(); n];
    for &(u, v) in &opts.disequalities {
        if u != v {
            diseq[u].push(v);
            diseq[v].push(u);
        }
    }
    let restricted = (0..n)
        .map(|v| opts.strict || opts.weight_exact.is_some() || domains[v].is_some() || !diseq[v].is_empty())
        .collect();
    let ctx = Ctx {
        g,
        t,
        full,
        strict: opts.strict,
        weight: opts.weight_exact,
        domains,
        domain_sets,
        diseq,
        restricted,
        nodes: AtomicU64::new(0),
        max_nodes: opts.budget.max_nodes,
        deadline: opts.budget.max_time.map(|d| Instant::now() + d),
        out_of_budget: AtomicBool::new(false),
        best_root: AtomicUsize::new(usize::MAX),
    };
    // A self-disequality can never hold.
    if opts.disequalities.iter().any(|&(u, v)| u == v) {
        return ctx.finish(Outcome::Unsat { exhaustive: true }, false);
    }

    let mut st = State {
        vals: vec![None; n],
        rows: vec![Vec::new(); n],
        trail: Vec::new(),
        unassigned: n,
    };
    for (&v, x) in &opts.fixed {
        if !ctx.allowed(v, x.bits()) || !ctx.assign(&mut st, v, x.bits()) {
            return ctx.finish(Outcome::Unsat { exhaustive: true }, false);
        }
    }

    let symmetry = opts.symmetry
        && opts.fixed.is_empty()
        && ctx.domains.iter().flatten().all(|d| closed_under_permutation(d, t));

    if st.unassigned == 0 {
        return ctx.finish(Outcome::Sat(ctx.assignment(&st)), false);
    }
    let root = ctx.select(&st);
    let roots: Vec<u64> = if symmetry {
        (0..=t).map(|w| mask(w)).collect()
    } else {
        ctx.candidates(&st, root).collect()
    };

    let jobs = opts.jobs.max(1);
    let outcome = if jobs == 1 || roots.len() < 2 {
        ctx.search_roots(&mut st, root, &roots)
    } else {
        ctx.search_roots_parallel(&st, root, &roots, jobs)
    };
    ctx.finish(outcome, symmetry)
}

/// A domain list is invariant under coordinate permutations iff it is a union
/// of full weight classes.
fn closed_under_permutation(d: &[u64], t: usize) -> bool {
    let mut per_weight = vec![0u64; t + 1];
    for &x in d {
        per_weight[x.count_ones() as usize] += 1;
    }
    per_weight
        .iter()
        .enumerate()
        .all(|(w, &c)| c == 0 || c == binomial(t as u64, w as u64))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Scatters the low bits of `src` into the set positions of `positions`.
fn deposit(mut src: u64, mut positions: u64) -> u64 {
    let mut out = 0;
    while positions != 0 {
        let low = positions & positions.wrapping_neg();
        if src & 1 == 1 {
            out |= low;
        }
        src >>= 1;
        positions &= positions - 1;
    }
    out
}

/// All solutions of an echelon system, in binary-counter order of the free coordinates.
struct Solutions {
    rows: Vec<Row>,
    free: u64,
    next: u128,
    end: u128,
}

impl Solutions {
    fn new(rows: &[Row], full: u64) -> Self {
        let pivots = rows.iter().fold(0u64, |acc, r| acc | (1 << r.pivot));
        let free = full & !pivots;
        Solutions {
            rows: rows.to_vec(),
            free,
            next: 0,
            end: 1u128 << free.count_ones(),
        }
    }
}

impl Iterator for Solutions {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.next == self.end {
            return None;
        }
        let mut x = deposit(self.next as u64, self.free);
        self.next += 1;
        for r in self.rows.iter().rev() {
            if parity(r.coef & x) != r.rhs {
                x |= 1 << r.pivot;
            }
        }
        Some(x)
    }
}

fn satisfies(rows: &[Row], x: u64) -> bool {
    rows.iter().all(|r| parity(r.coef & x) == r.rhs)
}

impl Ctx<'_> {
    fn finish(&self, outcome: Outcome, symmetry_breaking: bool) -> SolveResult {
        let nodes = self.nodes.load(Ordering::Relaxed);
        let nodes = self.max_nodes.map_or(nodes, |m| nodes.min(m));
        SolveResult {
            outcome,
            nodes,
            symmetry_breaking,
        }
    }

    fn assignment(&self, st: &State) -> Assignment {
        Assignment {
            t: self.t,
            vectors: st
                .vals
                .iter()
                .map(|x| F2Vector::truncated(self.t, x.expect("complete assignment")))
                .collect(),
        }
    }

    /// Counts a node; false once the budget is exhausted or a lower root already won.
    fn tick(&self, root: usize) -> bool {
        if self.out_of_budget.load(Ordering::Relaxed) || self.best_root.load(Ordering::Relaxed) < root {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = self.max_nodes.is_some_and(|m| n > m)
            || (n % 256 == 1 && self.deadline.is_some_and(|d| Instant::now() >= d));
        if over {
            self.out_of_budget.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn allowed(&self, v: usize, x: u64) -> bool {
        if self.strict && x == 0 {
            return false;
        }
        if let Some(w) = self.weight {
            if x.count_ones() != w {
                return false;
            }
        }
        match &self.domain_sets[v] {
            Some(s) => s.contains(&x),
            None => true,
        }
    }

    fn valid(&self, st: &State, v: usize, x: u64) -> bool {
        self.allowed(v, x) && self.diseq[v].iter().all(|&w| st.vals[w] != Some(x))
    }

    fn free_dims(&self, st: &State, v: usize) -> usize {
        self.t - st.rows[v].len()
    }

    /// Most-constrained vertex first; ties by degree, then id.
    fn select(&self, st: &State) -> usize {
        (0..self.g.n())
            .filter(|&v| st.vals[v].is_none())
            .min_by_key(|&v| {
                let mut size = self.free_dims(st, v);
                if let Some(d) = &self.domains[v] {
                    size = size.min(usize::BITS as usize - d.len().leading_zeros() as usize);
                }
                (size, Reverse(self.g.degree(v)), v)
            })
            .expect("an unassigned vertex exists")
    }

    fn candidates<'s>(&'s self, st: &State, v: usize) -> Box<dyn Iterator<Item = u64> + 's> {
        let rows = st.rows[v].clone();
        let free = self.free_dims(st, v) as u32;
        match &self.domains[v] {
            Some(d) if (d.len() as u128) <= (1u128 << free) => {
                Box::new(d.iter().copied().filter(move |&x| satisfies(&rows, x)))
            }
            _ => Box::new(Solutions::new(&rows, self.full).filter(move |&x| self.allowed(v, x))),
        }
    }

    /// True when some member of `w`'s current domain is valid, or when that is too
    /// costly to decide.
    fn has_support(&self, st: &State, w: usize) -> bool {
        let rows = &st.rows[w];
        let sol_count = 1u128 << self.free_dims(st, w);
        match &self.domains[w] {
            Some(d) if (d.len() as u128) <= sol_count => {
                d.len() as u64 > FORWARD_CHECK_LIMIT
                    || d.iter().any(|&x| satisfies(rows, x) && self.valid(st, w, x))
            }
            _ => {
                sol_count > FORWARD_CHECK_LIMIT as u128
                    || Solutions::new(rows, self.full).any(|x| self.valid(st, w, x))
            }
        }
    }

    fn add_equation(&self, st: &mut State, w: usize, mut coef: u64, mut rhs: bool) -> bool {
        for r in &st.rows[w] {
            if coef >> r.pivot & 1 == 1 {
                coef ^= r.coef;
                rhs ^= r.rhs;
            }
        }
        if coef == 0 {
            return !rhs;
        }
        st.rows[w].push(Row {
            coef,
            rhs,
            pivot: coef.trailing_zeros(),
        });
        st.trail.push(w);
        true
    }

    /// Assigns `v = x` and propagates; on false the caller must undo.
    fn assign(&self, st: &mut State, v: usize, x: u64) -> bool {
        if !self.valid(st, v, x) {
            return false;
        }
        st.vals[v] = Some(x);
        st.unassigned -= 1;
        for &(w, c) in self.g.neighbors(v) {
            match st.vals[w] {
                Some(y) => {
                    if parity(x & y) != c {
                        return false;
                    }
                }
                None => {
                    if !self.add_equation(st, w, x, c) {
                        return false;
                    }
                }
            }
        }
        let touched = self.g.neighbors(v).iter().map(|&(w, _)| w).chain(self.diseq[v].iter().copied());
        for w in touched {
            if st.vals[w].is_none() && self.restricted[w] && !self.has_support(st, w) {
                return false;
            }
        }
        true
    }

    fn undo(&self, st: &mut State, v: usize, mark: usize) {
        while st.trail.len() > mark {
            let w = st.trail.pop().expect("trail entry");
            st.rows[w].pop();
        }
        if st.vals[v].take().is_some() {
            st.unassigned += 1;
        }
    }

    /// A vertex whose neighbors and disequality partners are all assigned cannot
    /// influence the rest of the search.
    fn independent(&self, st: &State, v: usize) -> bool {
        self.g.neighbors(v).iter().all(|&(w, _)| st.vals[w].is_some())
            && self.diseq[v].iter().all(|&w| st.vals[w].is_some())
    }

    fn try_value(&self, st: &mut State, v: usize, x: u64, root: usize) -> Step {
        if !self.tick(root) {
            return Step::Abort;
        }
        let mark = st.trail.len();
        let step = if self.assign(st, v, x) {
            self.dfs(st, root)
        } else {
            Step::Unsat
        };
        if !matches!(step, Step::Sat) {
            self.undo(st, v, mark);
        }
        step
    }

    fn dfs(&self, st: &mut State, root: usize) -> Step {
        if st.unassigned == 0 {
            return Step::Sat;
        }
        let v = self.select(st);
        let independent = self.independent(st, v);
        for x in self.candidates(st, v) {
            if !self.valid(st, v, x) {
                continue;
            }
            match self.try_value(st, v, x, root) {
                Step::Unsat if independent => return Step::Unsat,
                Step::Unsat => {}
                other => return other,
            }
        }
        Step::Unsat
    }

    fn search_roots(&self, st: &mut State, v: usize, roots: &[u64]) -> Outcome {
        for &x in roots {
            match self.try_value(st, v, x, 0) {
                Step::Sat => return Outcome::Sat(self.assignment(st)),
                Step::Abort => return Outcome::BudgetExceeded,
                Step::Unsat => {}
            }
        }
        Outcome::Unsat { exhaustive: true }
    }

    fn search_roots_parallel(&self, st: &State, v: usize, roots: &[u64], jobs: usize) -> Outcome {
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(p) => p,
            Err(_) => return self.search_roots(&mut st.clone(), v, roots),
        };
        let results: Vec<Option<Assignment>> = pool.install(|| {
            roots
                .par_iter()
                .enumerate()
                .map(|(i, &x)| {
                    let mut local = st.clone();
                    match self.try_value(&mut local, v, x, i) {
                        Step::Sat => {
                            self.best_root.fetch_min(i, Ordering::Relaxed);
                            Some(self.assignment(&local))
                        }
                        _ => None,
                    }
                })
                .collect()
        });
        let best = self.best_root.load(Ordering::Relaxed);
        if best != usize::MAX {
            return Outcome::Sat(results[best].clone().expect("winning root has a witness"));
        }
        if self.out_of_budget.load(Ordering::Relaxed) {
            Outcome::BudgetExceeded
        } else {
            Outcome::Unsat { exhaustive: true }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deposit_scatters_bits() {
        assert_eq!(deposit(0b11, 0b1010), 0b1010);
        assert_eq!(deposit(0b01, 0b1010), 0b0010);
        assert_eq!(deposit(0b10, 0b1010), 0b1000);
    }

    #[test]
    fn solutions_enumerate_the_system() {
        // x0 + x1 = 1 over F2^3
        let rows = [Row { coef: 0b011, rhs: true, pivot: 0 }];
        let sols: Vec<u64> = Solutions::new(&rows, 0b111).collect();
        assert_eq!(sols.len(), 4);
        for x in sols {
            assert!(parity(x & 0b011));
        }
    }

    #[test]
    fn permutation_closure() {
        assert!(closed_under_permutation(&[0b001, 0b010, 0b100], 3));
        assert!(!closed_under_permutation(&[0b001, 0b010], 3));
        assert_eq!(binomial(10, 3), 120);
    }
}
