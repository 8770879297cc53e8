use std::collections::BTreeMap;
use std::io::Read;

use rand::seq::IndexedRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{excess_edges, spearman, topk_overlap};
use crate::error::{Error, Result};
use crate::graph::{canonical_dg, parent_graph, Dmg, DmgBuilder, ObservedSet};
use crate::rng::{self, Rng};
use crate::screening::{run, AlgorithmId, ScreeningOptions};
use crate::separation::GraphOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SynapseKind {
    Chemical,
    Gap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectomeSpec {
    /// Connections need strictly more synapses than this.
    pub threshold: u32,
    /// Observed subnetwork size.
    pub m: usize,
    /// Sampling weight is `(1 + degree)^weight_exponent`.
    pub weight_exponent: f64,
    pub replicates: usize,
    pub top_k: usize,
    pub algorithm: AlgorithmId,
    pub seed: u64,
}

impl Default for ConnectomeSpec {
    fn default() -> Self {
        ConnectomeSpec {
            threshold: 4,
            m: 75,
            weight_exponent: 1.0,
            replicates: 10,
            top_k: 15,
            algorithm: AlgorithmId::Cs,
            seed: 0,
        }
    }
}

/// Reads a `pre,post,count,type` CSV (type `chem` or `gap`).
///
/// Chemical connections become `pre -> post`, gap junctions `pre <-> post`,
/// each only when the synapse count exceeds `threshold`. Repeated records of
/// the same connection are merged by taking the largest count. Every neuron
/// named in the file is a node, in order of first appearance.
pub fn ingest_connectome<R: Read>(r: R, threshold: u32) -> Result<Dmg> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or_else(|| Error::Malformed {
            line: 1,
            msg: format!("missing column `{name}`"),
        })
    };
    let (ipre, ipost, icount, itype) = (col("pre")?, col("post")?, col("count")?, col("type")?);

    let mut g = DmgBuilder::new();
    let mut strongest: BTreeMap<(SynapseKind, usize, usize), u32> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::Malformed { line, msg };
        let field = |i: usize, name: &str| match rec.get(i) {
            Some(s) if !s.is_empty() => Ok(s),
            _ => Err(bad(format!("missing `{name}`"))),
        };
        let (pre, post) = (field(ipre, "pre")?, field(ipost, "post")?);
        let raw = field(icount, "count")?;
        let count: u32 = raw.parse().map_err(|_| bad(format!("count `{raw}` is not a positive integer")))?;
        if count == 0 {
            return Err(bad("count must be at least 1".into()));
        }
        let kind = match field(itype, "type")?.to_ascii_lowercase().as_str() {
            "chem" | "chemical" => SynapseKind::Chemical,
            "gap" => SynapseKind::Gap,
            other => return Err(bad(format!("unknown synapse type `{other}`"))),
        };
        let (a, b) = (g.ensure_node(pre).index(), g.ensure_node(post).index());
        let key = match kind {
            SynapseKind::Gap => (kind, a.min(b), a.max(b)),
            SynapseKind::Chemical => (kind, a, b),
        };
        let c = strongest.entry(key).or_insert(0);
        *c = (*c).max(count);
    }
    if g.node_count() == 0 {
        return Err(Error::NoNodes);
    }
    for ((kind, a, b), count) in strongest {
        if count <= threshold || a == b {
            continue;
        }
        match kind {
            SynapseKind::Chemical => g.insert_directed(a, b),
            SynapseKind::Gap => g.insert_bidirected(a, b),
        }
    }
    Ok(g.build())
}

/// Directed in- plus out-degree plus bidirected degree, loops excluded.
pub fn degree(g: &Dmg, v: usize) -> usize {
    g.in_degree(v) + g.out_degree(v) + g.siblings(v).len()
}

/// Weighted sampling of `m` nodes without replacement, weight
/// `(1 + degree)^w`.
pub fn subsample(g: &Dmg, m: usize, w: f64, rng: &mut Rng) -> Result<ObservedSet> {
    let n = g.node_count();
    if m > n {
        return Err(Error::SampleTooLarge { m, n });
    }
    let weights: Vec<f64> = (0..n).map(|v| (1.0 + degree(g, v) as f64).powf(w)).collect();
    let nodes: Vec<usize> = (0..n).collect();
    let chosen = nodes
        .choose_multiple_weighted(rng, m, |&v| weights[v])
        .map_err(|e| Error::InvalidConfig(format!("sampling weights: {e}")))?;
    Ok(chosen.copied().collect())
}

/// One subsampled learning run on a connectome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectomeRow {
    pub replicate: usize,
    pub m: usize,
    pub true_edges: usize,
    pub output_edges: usize,
    pub excess: usize,
    pub calls: u64,
    pub spearman_in: f64,
    pub spearman_out: f64,
    pub top_in: usize,
    pub top_out: usize,
}

/// For each replicate `r` (random stream `(seed, r)`): subsample the
/// observed neurons, learn from the oracle of the canonical DG, and compare
/// with the parent graph of the canonical DG on the sample. Correlations are
/// NaN when undefined.
pub fn connectome_run(g: &Dmg, spec: &ConnectomeSpec) -> Result<Vec<ConnectomeRow>> {
    let (canon, _) = canonical_dg(g);
    (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(spec.seed, r as u64);
            let o = subsample(g, spec.m, spec.weight_exponent, &mut rng)?;
            let truth = parent_graph(&canon, &o)?;
            let oracle = GraphOracle::new(canon.clone(), &o)?;
            let out = run(spec.algorithm, &oracle, ScreeningOptions::default())?;
            let excess = excess_edges(&out.graph, &truth)?;
            let k = spec.top_k.min(o.len());
            let ins = |d: &Dmg| (0..d.node_count()).map(|v| d.in_degree(v)).collect::<Vec<_>>();
            let outs = |d: &Dmg| (0..d.node_count()).map(|v| d.out_degree(v)).collect::<Vec<_>>();
            let rho = |a: Vec<usize>, b: Vec<usize>| {
                let f = |v: Vec<usize>| v.into_iter().map(|x| x as f64).collect::<Vec<_>>();
                spearman(&f(a), &f(b)).unwrap_or(f64::NAN)
            };
            Ok(ConnectomeRow {
                replicate: r,
                m: o.len(),
                true_edges: truth.directed_count(),
                output_edges: out.graph.directed_count(),
                excess,
                calls: out.oracle_calls,
                spearman_in: rho(ins(&truth), ins(&out.graph)),
                spearman_out: rho(outs(&truth), outs(&out.graph)),
                top_in: topk_overlap(&ins(&truth), &ins(&out.graph), k)?,
                top_out: topk_overlap(&outs(&truth), &outs(&out.graph), k)?,
            })
        })
        .collect()
}
