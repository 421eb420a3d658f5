//! JSON certificates bound to a SHA-256 digest of the canonical graph text.
//!
//! An `unsat` certificate attests that a search was exhausted; it is not a
//! replayable proof. Assignments and sequences are checked on load.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::f2::F2Vector;
use crate::graph::{ColoredGraph, InversionSequence};
use crate::solver::{Assignment, Outcome, SolveOptions, SolveResult};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("graph digest mismatch")]
    Digest,
    #[error("certificate payload does not check: {0}")]
    Payload(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Assignment,
    Sequence,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub t: usize,
    pub graph_sha: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<BTreeMap<usize, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<usize>>>,
    pub options: serde_json::Value,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// Hex SHA-256 of [`ColoredGraph::canonical_text`].
pub fn graph_sha(g: &ColoredGraph) -> String {
    let digest = Sha256::digest(g.canonical_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Certificate {
    pub fn assignment(g: &ColoredGraph, a: &Assignment, options: serde_json::Value, nodes: u64) -> Self {
        Certificate {
            kind: CertKind::Assignment,
            t: a.t(),
            graph_sha: graph_sha(g),
            vectors: Some(a.vectors().iter().map(F2Vector::to_bitstring).enumerate().collect()),
            sets: None,
            options,
            exhaustive: false,
            nodes,
        }
    }

    pub fn sequence(g: &ColoredGraph, s: &InversionSequence) -> Self {
        Certificate {
            kind: CertKind::Sequence,
            t: s.len(),
            graph_sha: graph_sha(g),
            vectors: None,
            sets: Some(s.sets.clone()),
            options: serde_json::json!({}),
            exhaustive: false,
            nodes: 0,
        }
    }

    /// Certificate for a solver run, `None` when the budget ran out.
    pub fn from_result(g: &ColoredGraph, t: usize, opts: &SolveOptions, r: &SolveResult) -> Option<Self> {
        let mut options = opts.summary();
        options["symmetry_breaking"] = r.symmetry_breaking.into();
        match &r.outcome {
            Outcome::Sat(a) => Some(Self::assignment(g, a, options, r.nodes)),
            Outcome::Unsat { exhaustive } => Some(Certificate {
                kind: CertKind::Unsat,
                t,
                graph_sha: graph_sha(g),
                vectors: None,
                sets: None,
                options,
                exhaustive: *exhaustive,
                nodes: r.nodes,
            }),
            Outcome::BudgetExceeded => None,
        }
    }

    /// Rebinds to `g` and re-checks the payload. `unsat` certificates only
    /// have their digest and exhaustiveness flag checked.
    pub fn check(&self, g: &ColoredGraph) -> Result<(), CertError> {
        if self.graph_sha != graph_sha(g) {
            return Err(CertError::Digest);
        }
        match self.kind {
            CertKind::Assignment => {
                let a = self.to_assignment(g.n())?;
                if !a.satisfies(g) {
                    return Err(CertError::Payload("assignment violates an edge".into()));
                }
            }
            CertKind::Sequence => {
                let s = InversionSequence::new(self.sets.clone().ok_or_else(|| CertError::Payload("missing sets".into()))?);
                let done = g.apply_sequence(&s).map_err(|e| CertError::Payload(e.to_string()))?;
                if s.len() != self.t || !done.is_all_zero() {
                    return Err(CertError::Payload("sequence does not zero the coloring".into()));
                }
            }
            CertKind::Unsat => {
                if !self.exhaustive {
                    return Err(CertError::Payload("search was not exhaustive".into()));
                }
            }
        }
        Ok(())
    }

    pub fn to_assignment(&self, n: usize) -> Result<Assignment, CertError> {
        let vectors = self.vectors.as_ref().ok_or_else(|| CertError::Payload("missing vectors".into()))?;
        if vectors.len() != n || vectors.keys().any(|&v| v >= n) {
            return Err(CertError::Payload(format!("expected vectors for {n} vertices")));
        }
        let strings: Vec<&String> = vectors.values().collect();
        Assignment::from_bitstrings(self.t, &strings).map_err(|e| CertError::Payload(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), CertError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CertError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::find_inversion;

    #[test]
    fn digest_is_stable_and_color_sensitive() {
        let g = ColoredGraph::path(&[true, false]);
        assert_eq!(graph_sha(&g), graph_sha(&g.clone()));
        assert_eq!(graph_sha(&g).len(), 64);
        assert_ne!(graph_sha(&g), graph_sha(&g.complemented()));
        // sha256("") as a sanity check of the hex encoding
        let d: String = Sha256::digest(b"").iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(d, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn assignment_round_trip() {
        let g = ColoredGraph::cycle(&[true; 5]);
        let opts = SolveOptions::default();
        let r = find_inversion(&g, 3, &opts).unwrap();
        let c = Certificate::from_result(&g, 3, &opts, &r).unwrap();
        assert_eq!(c.kind, CertKind::Assignment);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        back.check(&g).unwrap();
        assert!(matches!(back.check(&g.complemented()), Err(CertError::Digest)));
        let json: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(json["kind"], "assignment");
        assert!(json["vectors"]["4"].is_string());
    }

    #[test]
    fn tampered_assignment_fails() {
        let g = ColoredGraph::path(&[true]);
        let a = Assignment::from_bitstrings(1, &["1", "1"]).unwrap();
        let mut c = Certificate::assignment(&g, &a, serde_json::json!({}), 0);
        c.check(&g).unwrap();
        c.vectors.as_mut().unwrap().insert(1, "0".into());
        assert!(matches!(c.check(&g), Err(CertError::Payload(_))));
    }

    #[test]
    fn unsat_and_sequence() {
        let g = ColoredGraph::cycle(&[true, true, false]);
        let opts = SolveOptions::default();
        let r = find_inversion(&g, 1, &opts).unwrap();
        let c = Certificate::from_result(&g, 1, &opts, &r).unwrap();
        assert_eq!((c.kind, c.exhaustive), (CertKind::Unsat, true));
        c.check(&g).unwrap();
        let starved = opts.with_budget(crate::solver::Budget::nodes(0));
        let r = find_inversion(&g, 1, &starved).unwrap();
        assert!(Certificate::from_result(&g, 1, &starved, &r).is_none());

        let s = InversionSequence::new(vec![vec![0, 1, 2, 3, 4]]);
        let g = ColoredGraph::complete(5, true);
        let c = Certificate::sequence(&g, &s);
        c.check(&g).unwrap();
        assert!(Certificate::sequence(&g, &InversionSequence::default()).check(&g).is_err());
    }
}
