//! Local-independence oracles.
//!
//! Queries are phrased over the observed nodes only, indexed `0..m` in
//! increasing order of their index in the hidden truth.

use std::collections::HashMap;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use super::{mu_separated, SeparationQuery};
use crate::error::{Error, Result};
use crate::graph::{Dmg, NodeSet, ObservedSet};

/// Answers `<A, B | C>`: `true` means independent.
pub trait IndependenceOracle {
    /// Labels of the observed nodes, in local index order.
    fn labels(&self) -> &[String];

    fn observed_count(&self) -> usize {
        self.labels().len()
    }

    fn query(&self, q: &SeparationQuery) -> Result<bool>;

    /// Number of queries answered so far.
    fn calls(&self) -> u64;

    /// `<{alpha}, {beta} | C>`.
    fn independent(&self, alpha: usize, beta: usize, c: &NodeSet) -> Result<bool> {
        self.query(&SeparationQuery::pair(alpha, beta, c.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub independent: bool,
}

/// Oracle backed by mu-separation in a hidden graph.
///
/// Every call bumps the counter, memo hits included, so call counts are
/// comparable with test counts of a statistical procedure.
#[derive(Debug)]
pub struct GraphOracle {
    truth: Dmg,
    to_truth: Vec<usize>,
    labels: Vec<String>,
    calls: AtomicU64,
    log: Option<Mutex<Vec<QueryRecord>>>,
    memo: Option<Mutex<HashMap<SeparationQuery, bool>>>,
}

impl GraphOracle {
    pub fn new(truth: Dmg, observed: &ObservedSet) -> Result<Self> {
        truth.check_subset(observed)?;
        let to_truth = observed.to_vec();
        let labels = to_truth.iter().map(|&v| truth.labels()[v].clone()).collect();
        Ok(GraphOracle {
            truth,
            to_truth,
            labels,
            calls: AtomicU64::new(0),
            log: None,
            memo: None,
        })
    }

    /// Oracle observing every node of `truth`.
    pub fn fully_observed(truth: Dmg) -> Self {
        let all = truth.all_nodes();
        Self::new(truth, &all).expect("all nodes are in range")
    }

    pub fn with_log(mut self) -> Self {
        self.log = Some(Mutex::new(Vec::new()));
        self
    }

    pub fn with_memo(mut self) -> Self {
        self.memo = Some(Mutex::new(HashMap::new()));
        self
    }

    pub fn truth(&self) -> &Dmg {
        &self.truth
    }

    /// Observed nodes as indices into the truth.
    pub fn observed(&self) -> ObservedSet {
        self.to_truth.iter().copied().collect()
    }

    pub fn log(&self) -> Vec<QueryRecord> {
        self.log
            .as_ref()
            .map(|l| l.lock().expect("log lock").clone())
            .unwrap_or_default()
    }

    fn lift(&self, s: &NodeSet) -> Result<NodeSet> {
        let mut out = NodeSet::with_capacity(self.truth.node_count());
        for v in s.iter() {
            out.insert(*self.to_truth.get(v).ok_or(Error::UnobservedNode(v))?);
        }
        Ok(out)
    }

    /// Writes the query log as `A;B;C;answer` rows, labels joined by `|`.
    pub fn write_log_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let join = |s: &[usize]| {
            s.iter().map(|&v| self.labels[v].as_str()).collect::<Vec<_>>().join("|")
        };
        writeln!(w, "A;B;C;answer")?;
        for r in self.log() {
            let answer = if r.independent { "independent" } else { "dependent" };
            writeln!(w, "{};{};{};{}", join(&r.a), join(&r.b), join(&r.c), answer)?;
        }
        Ok(())
    }
}

impl IndependenceOracle for GraphOracle {
    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn query(&self, q: &SeparationQuery) -> Result<bool> {
        if q.a.is_empty() || q.b.is_empty() {
            return Err(Error::EmptyQuerySet);
        }
        let lifted = SeparationQuery::new(self.lift(&q.a)?, self.lift(&q.b)?, self.lift(&q.c)?);
        self.calls.fetch_add(1, Ordering::SeqCst);
        let cached = self
            .memo
            .as_ref()
            .and_then(|m| m.lock().expect("memo lock").get(q).copied());
        let answer = match cached {
            Some(a) => a,
            None => {
                let a = mu_separated(&self.truth, &lifted)?;
                if let Some(m) = &self.memo {
                    m.lock().expect("memo lock").insert(q.clone(), a);
                }
                a
            }
        };
        if let Some(log) = &self.log {
            log.lock().expect("log lock").push(QueryRecord {
                a: q.a.to_vec(),
                b: q.b.to_vec(),
                c: q.c.to_vec(),
                independent: answer,
            });
        }
        Ok(answer)
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::six_node;

    fn six_node_oracle() -> GraphOracle {
        let g = six_node();
        let o = g.resolve_labels(&["alpha", "delta", "epsilon"]).unwrap();
        GraphOracle::new(g, &o).unwrap()
    }

    #[test]
    fn six_node_queries() {
        let o = six_node_oracle();
        assert_eq!(o.labels(), ["alpha", "delta", "epsilon"]);
        // <alpha, epsilon | {epsilon}>: directed trek from alpha to epsilon
        assert!(!o.independent(0, 2, &NodeSet::from([2])).unwrap());
        assert!(o.independent(0, 0, &NodeSet::from([0])).unwrap());
        assert_eq!(o.calls(), 2);
    }

    #[test]
    fn counter_counts_every_call() {
        let o = six_node_oracle().with_memo();
        for k in 1..=5 {
            o.independent(1, 2, &NodeSet::new()).unwrap();
            assert_eq!(o.calls(), k);
        }
    }

    #[test]
    fn unobserved_nodes_rejected() {
        let o = six_node_oracle();
        assert!(matches!(
            o.independent(0, 3, &NodeSet::new()),
            Err(Error::UnobservedNode(3))
        ));
        assert_eq!(o.calls(), 0);
    }

    #[test]
    fn log_export() {
        let o = six_node_oracle().with_log();
        o.independent(0, 2, &NodeSet::from([1, 2])).unwrap();
        o.independent(2, 0, &NodeSet::new()).unwrap();
        let mut buf = Vec::new();
        o.write_log_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "A;B;C;answer");
        assert_eq!(lines[1], "alpha;epsilon;delta|epsilon;dependent");
        assert_eq!(lines.len(), 3);
    }
}
