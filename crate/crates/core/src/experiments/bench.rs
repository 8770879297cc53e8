use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::corpus::{draw, random_observed, CorpusConfig};
use super::metrics::{excess_edges, MetricsRow};
use crate::error::{Error, Result};
use crate::graph::{canonical_dg, directed_part, latent_projection, ObservedSet};
use crate::rng;
use crate::screening::{run, AlgorithmId, ScreeningOptions};
use crate::separation::GraphOracle;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub corpus: CorpusConfig,
    pub algorithms: Vec<AlgorithmId>,
    /// Fraction of the generated nodes hidden from the learners.
    pub latent_fraction: f64,
    pub options: ScreeningOptions,
    /// Record wall-clock milliseconds; otherwise `ms` is 0 so that output is
    /// reproducible.
    pub timing: bool,
}

impl BenchConfig {
    pub fn new(corpus: CorpusConfig, algorithms: Vec<AlgorithmId>) -> Self {
        BenchConfig { corpus, algorithms, latent_fraction: 0.0, options: ScreeningOptions::default(), timing: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub algo: String,
    pub n: usize,
    pub p_dir: f64,
    pub p_bi: f64,
    pub replicates: usize,
    pub mean_true_directed: f64,
    pub mean_excess: f64,
    pub mean_calls: f64,
    pub max_calls: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOutput {
    pub rows: Vec<MetricsRow>,
    pub summary: Vec<Summary>,
}

/// Runs every algorithm on every replicate of the corpus.
///
/// Replicate `i` draws its truth, and then its hidden nodes, from the stream
/// `(seed, i)`. The learners query the canonical DG of the truth through a
/// fresh oracle each; the reference is the directed part of the latent
/// projection on the observed nodes. Rows come back in replicate order,
/// algorithms in the order given.
pub fn bench_run(cfg: &BenchConfig) -> Result<BenchOutput> {
    let c = &cfg.corpus;
    c.validate()?;
    if !(0.0..1.0).contains(&cfg.latent_fraction) {
        return Err(Error::InvalidConfig(format!("latent fraction {} not in [0, 1)", cfg.latent_fraction)));
    }
    let per_replicate: Vec<Vec<MetricsRow>> = (0..c.count)
        .into_par_iter()
        .map(|i| replicate(cfg, i))
        .collect::<Result<_>>()?;
    let rows: Vec<MetricsRow> = per_replicate.into_iter().flatten().collect();
    let summary = summarize(&rows);
    Ok(BenchOutput { rows, summary })
}

fn replicate(cfg: &BenchConfig, i: usize) -> Result<Vec<MetricsRow>> {
    let c = &cfg.corpus;
    let mut rng = rng::stream(c.seed, i as u64);
    let truth = draw(c, &mut rng);
    let hidden = (cfg.latent_fraction * c.n as f64).round() as usize;
    let o: ObservedSet = if hidden == 0 {
        truth.all_nodes()
    } else {
        random_observed(c.n, c.n - hidden.min(c.n - 1), &mut rng)
    };
    let (canon, _) = canonical_dg(&truth);
    let reference = directed_part(&latent_projection(&canon, &o)?);
    cfg.algorithms
        .iter()
        .map(|&algo| {
            let oracle = GraphOracle::new(canon.clone(), &o)?;
            let start = Instant::now();
            let out = run(algo, &oracle, cfg.options)?;
            let ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
            Ok(MetricsRow {
                algo: algo.name().to_owned(),
                replicate: i,
                n: c.n,
                p_dir: c.p_dir,
                p_bi: c.p_bi,
                true_directed: truth.directed_count(),
                true_bidirected: truth.bidirected_count(),
                excess: excess_edges(&out.graph, &reference)?,
                calls: out.oracle_calls,
                ms,
            })
        })
        .collect()
}

/// Means per `(algorithm, n, p_dir, p_bi)`, in order of first appearance.
pub fn summarize(rows: &[MetricsRow]) -> Vec<Summary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<usize, Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        let key = (r.algo.as_str(), r.n, r.p_dir.to_bits(), r.p_bi.to_bits());
        let slot = match order.iter().position(|k| *k == key) {
            Some(s) => s,
            None => {
                order.push(key);
                order.len() - 1
            }
        };
        groups.entry(slot).or_default().push(r);
    }
    groups
        .into_values()
        .map(|g| {
            let k = g.len() as f64;
            let mean = |f: &dyn Fn(&MetricsRow) -> f64| g.iter().map(|r| f(r)).sum::<f64>() / k;
            Summary {
                algo: g[0].algo.clone(),
                n: g[0].n,
                p_dir: g[0].p_dir,
                p_bi: g[0].p_bi,
                replicates: g.len(),
                mean_true_directed: mean(&|r| r.true_directed as f64),
                mean_excess: mean(&|r| r.excess as f64),
                mean_calls: mean(&|r| r.calls as f64),
                max_calls: g.iter().map(|r| r.calls).max().unwrap_or(0),
            }
        })
        .collect()
}
