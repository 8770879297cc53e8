//! Simple screening learners.
//!
//! Every learner starts from the complete DG on the oracle's observed nodes
//! and removes edges based on oracle answers. Pair iteration order is fixed
//! (lexicographic by default) so runs are reproducible; the parent step
//! reads parent sets from the graph as it is being edited.

mod steps;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dmg, DmgBuilder, NodeId, NodeSet};
use crate::rng;
use crate::separation::IndependenceOracle;

pub use steps::{
    ancestry_propagation, ancestry_propagation_cheap, parent_step, parent_step_with, trek_step,
    trek_step_with,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AlgorithmId {
    /// Trek step, then parent step.
    Cs,
    /// Trek step, test-free ancestry propagation, parent step.
    Csapc,
    /// Trek step, oracle-assisted ancestry propagation, parent step.
    Csap,
    /// Exhaustive separating-set search per pair.
    Ca,
    TrekOnly,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::Cs,
        AlgorithmId::Csapc,
        AlgorithmId::Csap,
        AlgorithmId::Ca,
        AlgorithmId::TrekOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Cs => "cs",
            AlgorithmId::Csapc => "csapc",
            AlgorithmId::Csap => "csap",
            AlgorithmId::Ca => "ca",
            AlgorithmId::TrekOnly => "trek",
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs" => Ok(AlgorithmId::Cs),
            "csapc" => Ok(AlgorithmId::Csapc),
            "csap" => Ok(AlgorithmId::Csap),
            "ca" => Ok(AlgorithmId::Ca),
            "trek" | "trek_only" | "trek-only" => Ok(AlgorithmId::TrekOnly),
            _ => Err(Error::UnknownAlgorithm(s.to_owned())),
        }
    }
}

/// Order in which ordered pairs `(alpha, beta)` are visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairOrder {
    #[default]
    Lexicographic,
    /// A seeded shuffle of the lexicographic order.
    Random(u64),
}

impl FromStr for PairOrder {
    type Err = Error;

    /// `lex`, `random` (seed 0) or `random(SEED)` / `random:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "lex" {
            return Ok(PairOrder::Lexicographic);
        }
        let seed = s
            .strip_prefix("random")
            .map(|rest| rest.trim_start_matches([':', '(']).trim_end_matches(')'))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown pair order `{s}`")))?;
        if seed.is_empty() {
            return Ok(PairOrder::Random(0));
        }
        seed.parse()
            .map(PairOrder::Random)
            .map_err(|_| Error::InvalidConfig(format!("bad seed in pair order `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScreeningOptions {
    pub order: PairOrder,
    /// Repeat the parent step until nothing changes.
    pub parent_fixpoint: bool,
}

impl ScreeningOptions {
    pub(crate) fn pairs(&self, m: usize) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = (0..m)
            .cartesian_product(0..m)
            .filter(|(a, b)| a != b)
            .collect();
        if let PairOrder::Random(seed) = self.order {
            pairs.shuffle(&mut rng::stream(seed, 0));
        }
        pairs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Trek,
    Parent,
    AncestryCheap,
    Ancestry,
    Ca,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// Tested and kept.
    Kept,
    /// Removed on an independence answer.
    Removed,
    /// Removed by test-free ancestry propagation.
    Propagation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub tail: usize,
    pub head: usize,
    pub action: Action,
    pub stage: Stage,
}

/// Why an edge was removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    /// `<tail, head | set>` was found independent.
    Separating { set: Vec<usize> },
    /// `beta -> gamma` removed after `<witness, gamma | {}>` was found independent.
    AncestryWitness { witness: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnResult {
    pub algorithm: AlgorithmId,
    /// DG on the observed nodes, local indexing.
    pub graph: Dmg,
    pub oracle_calls: u64,
    pub certificates: BTreeMap<(usize, usize), Certificate>,
    pub trace: Vec<TraceEntry>,
}

impl LearnResult {
    /// JSON report with node labels.
    pub fn to_json(&self, with_certificates: bool, with_trace: bool) -> serde_json::Value {
        let l = self.graph.labels();
        let mut v = self.graph.to_json_value();
        let obj = v.as_object_mut().expect("graph json is an object");
        obj.insert("algorithm".into(), self.algorithm.name().into());
        obj.insert("oracle_calls".into(), self.oracle_calls.into());
        if with_certificates {
            let certs: Vec<_> = self
                .certificates
                .iter()
                .map(|(&(t, h), c)| {
                    let mut e = serde_json::json!({ "tail": l[t], "head": l[h] });
                    match c {
                        Certificate::Separating { set } => {
                            e["kind"] = "separating".into();
                            e["set"] = set.iter().map(|&v| l[v].clone()).collect();
                        }
                        Certificate::AncestryWitness { witness } => {
                            e["kind"] = "ancestry_witness".into();
                            e["witness"] = l[*witness].clone().into();
                        }
                    }
                    e
                })
                .collect();
            obj.insert("certificates".into(), certs.into());
        }
        if with_trace {
            let trace: Vec<_> = self
                .trace
                .iter()
                .map(|t| {
                    serde_json::json!({
                        "tail": l[t.tail],
                        "head": l[t.head],
                        "action": t.action,
                        "stage": t.stage,
                    })
                })
                .collect();
            obj.insert("trace".into(), trace.into());
        }
        v
    }
}

/// Mutable learner state shared by the steps.
pub(crate) struct Session<'o, O: IndependenceOracle + ?Sized> {
    pub oracle: &'o O,
    pub graph: DmgBuilder,
    pub certificates: BTreeMap<(usize, usize), Certificate>,
    pub trace: Vec<TraceEntry>,
    pub options: ScreeningOptions,
}

impl<'o, O: IndependenceOracle + ?Sized> Session<'o, O> {
    pub fn complete(oracle: &'o O, options: ScreeningOptions) -> Result<Self> {
        let graph = Dmg::complete(oracle.labels())?.to_builder();
        Ok(Self::on(oracle, graph, options))
    }

    pub fn on(oracle: &'o O, graph: DmgBuilder, options: ScreeningOptions) -> Self {
        Session { oracle, graph, certificates: BTreeMap::new(), trace: Vec::new(), options }
    }

    pub fn remove(&mut self, tail: usize, head: usize, stage: Stage, action: Action, cert: Option<Certificate>) {
        let removed = self
            .graph
            .remove_directed(NodeId(tail), NodeId(head))
            .expect("screening never removes loops");
        if removed {
            if let Some(c) = cert {
                self.certificates.entry((tail, head)).or_insert(c);
            }
            self.trace.push(TraceEntry { tail, head, action, stage });
        }
    }

    pub fn keep(&mut self, tail: usize, head: usize, stage: Stage) {
        self.trace.push(TraceEntry { tail, head, action: Action::Kept, stage });
    }
}

/// Runs one of the learners against `oracle`.
pub fn run<O: IndependenceOracle + ?Sized>(
    algorithm: AlgorithmId,
    oracle: &O,
    options: ScreeningOptions,
) -> Result<LearnResult> {
    let start = oracle.calls();
    if algorithm == AlgorithmId::Ca {
        let mut s = Session::complete(oracle, options)?;
        steps::ca_search(&mut s)?;
        return Ok(finish(algorithm, s, start));
    }
    let mut s = Session::complete(oracle, options)?;
    steps::trek_pass(&mut s)?;
    match algorithm {
        AlgorithmId::Csapc => steps::ancestry_cheap_pass(&mut s),
        AlgorithmId::Csap => steps::ancestry_pass(&mut s)?,
        _ => {}
    }
    if algorithm != AlgorithmId::TrekOnly {
        steps::parent_pass(&mut s)?;
    }
    Ok(finish(algorithm, s, start))
}

/// The exhaustive baseline: for each ordered pair, conditioning sets
/// `C ⊆ O \ {alpha}` by increasing size, lexicographic within a size, until
/// one separates.
pub fn ca_baseline<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    options: ScreeningOptions,
) -> Result<LearnResult> {
    run(AlgorithmId::Ca, oracle, options)
}

fn finish<O: IndependenceOracle + ?Sized>(algorithm: AlgorithmId, s: Session<'_, O>, start: u64) -> LearnResult {
    LearnResult {
        algorithm,
        graph: s.graph.build(),
        oracle_calls: s.oracle.calls() - start,
        certificates: s.certificates,
        trace: s.trace,
    }
}

pub(crate) fn set_of(items: impl IntoIterator<Item = usize>) -> NodeSet {
    items.into_iter().collect()
}

#[cfg(test)]
mod tests;

#[cfg(test)]
mod parse_tests {
    use super::*;

    #[test]
    fn algorithm_ids_parse() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.name().parse::<AlgorithmId>().unwrap(), a);
        }
        assert!(matches!("dfci".parse::<AlgorithmId>(), Err(Error::UnknownAlgorithm(_))));
    }

    #[test]
    fn pair_orders() {
        assert_eq!("lex".parse::<PairOrder>().unwrap(), PairOrder::Lexicographic);
        assert_eq!("random(7)".parse::<PairOrder>().unwrap(), PairOrder::Random(7));
        assert_eq!("random:9".parse::<PairOrder>().unwrap(), PairOrder::Random(9));
        assert!("zigzag".parse::<PairOrder>().is_err());

        let lex = ScreeningOptions::default().pairs(3);
        assert_eq!(lex, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        let opts = ScreeningOptions { order: PairOrder::Random(3), ..Default::default() };
        let mut shuffled = opts.pairs(3);
        assert_eq!(shuffled, opts.pairs(3));
        shuffled.sort();
        assert_eq!(shuffled, lex);
    }
}
