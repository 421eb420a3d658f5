use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use super::{find_inversion, norm_from, Assignment, NormError, Outcome, SolveOptions};
use crate::graph::ColoredGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiameterError {
    #[error("{edges} edges exceed the enumeration cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("automorphism {0} is not a permutation of the vertices preserving edges")]
    BadAutomorphism(usize),
    #[error("coloring {mask:#x}: {source}")]
    Norm { mask: u64, source: NormError },
}

#[derive(Debug, Clone)]
pub struct DiameterOptions {
    pub t_cap: usize,
    pub edge_cap: usize,
    /// Vertex permutations of the skeleton; colorings equivalent under one of
    /// them to a smaller edge mask are skipped.
    pub automorphisms: Vec<Vec<usize>>,
    pub jobs: usize,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        DiameterOptions {
            t_cap: 16,
            edge_cap: 24,
            automorphisms: Vec::new(),
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiameterResult {
    pub diameter: usize,
    /// A coloring attaining the maximum norm, with a witness of that norm.
    pub worst: ColoredGraph,
    pub witness: Assignment,
    pub colorings_checked: u64,
}

/// Maximum norm over all colorings of the skeleton `g`.
pub fn diameter(g: &ColoredGraph, opts: &DiameterOptions) -> Result<DiameterResult, DiameterError> {
    let m = g.m();
    if m > opts.edge_cap || m > 63 {
        return Err(DiameterError::TooManyEdges { edges: m, cap: opts.edge_cap.min(63) });
    }
    let perms = edge_permutations(g, &opts.automorphisms)?;
    let total = 1u64 << m;
    // Lower bound shared across workers; only ever raised.
    let best = AtomicUsize::new(0);
    let found: Mutex<Option<(u64, usize, Assignment)>> = Mutex::new(None);
    let error: Mutex<Option<(u64, NormError)>> = Mutex::new(None);
    let checked = std::sync::atomic::AtomicU64::new(0);

    let work = |i: u64| {
        let mask = i ^ (i >> 1);
        if perms.iter().any(|p| permute_mask(mask, p) < mask) {
            return;
        }
        checked.fetch_add(1, Ordering::Relaxed);
        let h = g.with_color_mask(mask);
        let lower = best.load(Ordering::Relaxed);
        if lower > 0 {
            match find_inversion(&h, lower - 1, &SolveOptions::default()) {
                Ok(r) => match r.outcome {
                    Outcome::Sat(_) => return,
                    Outcome::Unsat { .. } => {}
                    Outcome::BudgetExceeded => unreachable!("no budget was set"),
                },
                Err(e) => {
                    record_error(&error, i, NormError::Solve(e));
                    return;
                }
            }
        }
        match norm_from(&h, lower, opts.t_cap, &SolveOptions::default()) {
            Ok(r) => {
                best.fetch_max(r.norm, Ordering::Relaxed);
                let mut f = found.lock().expect("result lock");
                let better = match &*f {
                    None => true,
                    Some((idx, n, _)) => r.norm > *n || (r.norm == *n && i < *idx),
                };
                if better {
                    *f = Some((i, r.norm, r.witness));
                }
            }
            Err(e) => record_error(&error, i, e),
        }
    };

    if opts.jobs == 1 {
        (0..total).for_each(work);
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| (0..total).into_par_iter().for_each(work));
    }

    if let Some((i, source)) = error.into_inner().expect("error lock") {
        return Err(DiameterError::Norm { mask: i ^ (i >> 1), source });
    }
    let (i, d, witness) = found
        .into_inner()
        .expect("result lock")
        .expect("the all-0 coloring is always checked");
    Ok(DiameterResult {
        diameter: d,
        worst: g.with_color_mask(i ^ (i >> 1)),
        witness,
        colorings_checked: checked.into_inner(),
    })
}

fn record_error(slot: &Mutex<Option<(u64, NormError)>>, i: u64, e: NormError) {
    let mut s = slot.lock().expect("error lock");
    if s.as_ref().map_or(true, |(j, _)| i < *j) {
        *s = Some((i, e));
    }
}

/// Edge-index permutation induced by each vertex automorphism.
fn edge_permutations(g: &ColoredGraph, autos: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, DiameterError> {
    autos
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let mut seen = vec![false; g.n()];
            if p.len() != g.n() || p.iter().any(|&x| x >= g.n() || std::mem::replace(&mut seen[x], true)) {
                return Err(DiameterError::BadAutomorphism(k));
            }
            g.edges()
                .iter()
                .map(|e| g.edge_index(p[e.u], p[e.v]).ok_or(DiameterError::BadAutomorphism(k)))
                .collect()
        })
        .collect()
}

fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    perm.iter()
        .enumerate()
        .filter(|&(e, _)| mask >> e & 1 == 1)
        .fold(0, |acc, (_, &f)| acc | 1 << f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diam(g: &ColoredGraph) -> usize {
        diameter(g, &DiameterOptions::default()).unwrap().diameter
    }

    #[test]
    fn small_diameters() {
        assert_eq!(diam(&ColoredGraph::complete(2, false)), 1);
        assert_eq!(diam(&ColoredGraph::complete(3, false)), 2);
        assert_eq!(diam(&ColoredGraph::complete(4, false)), 3);
        assert_eq!(diam(&ColoredGraph::path(&[false; 3])), 2);
        assert_eq!(diam(&ColoredGraph::empty(3)), 0);
    }

    #[test]
    fn worst_coloring_attains_the_diameter() {
        let r = diameter(&ColoredGraph::complete(4, false), &DiameterOptions::default()).unwrap();
        assert!(r.witness.satisfies(&r.worst));
        assert_eq!(r.witness.t(), r.diameter);
        assert_eq!(crate::solver::norm(&r.worst, 8).unwrap().norm, r.diameter);
    }

    #[test]
    fn automorphisms_do_not_change_the_answer() {
        let k4 = ColoredGraph::complete(4, false);
        let mut autos = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    let mut p: Vec<usize> = (0..4).collect();
                    p.swap(a, b);
                    autos.push(p);
                }
            }
        }
        let opts = DiameterOptions { automorphisms: autos, ..Default::default() };
        let r = diameter(&k4, &opts).unwrap();
        assert_eq!(r.diameter, 3);
        assert!(r.colorings_checked < 64);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = ColoredGraph::cycle(&[false; 5]);
        let seq = diameter(&g, &DiameterOptions { jobs: 1, ..Default::default() }).unwrap();
        let par = diameter(&g, &DiameterOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(seq.diameter, par.diameter);
        assert_eq!(seq.worst, par.worst);
    }

    #[test]
    fn cap_and_bad_automorphisms() {
        let k8 = ColoredGraph::complete(8, false);
        assert!(matches!(diameter(&k8, &DiameterOptions::default()), Err(DiameterError::TooManyEdges { .. })));
        let p = ColoredGraph::path(&[false, false]);
        let opts = DiameterOptions { automorphisms: vec![vec![1, 0, 2]], ..Default::default() };
        assert_eq!(diameter(&p, &opts).unwrap_err(), DiameterError::BadAutomorphism(0));
    }
}
