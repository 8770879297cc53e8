use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Dmg;

/// Edges of `output` missing from `truth_parent`, loops excluded.
///
/// Both graphs must share labels. A true edge absent from the output is a
/// soundness violation and is reported as an error rather than counted.
pub fn excess_edges(output: &Dmg, truth_parent: &Dmg) -> Result<usize> {
    if output.labels() != truth_parent.labels() {
        return Err(Error::NodeSetMismatch);
    }
    let l = output.labels();
    let missing: Vec<(String, String)> = truth_parent
        .directed_edges()
        .filter(|&(t, h)| !output.has_directed(t, h))
        .map(|(t, h)| (l[t].clone(), l[h].clone()))
        .collect();
    if !missing.is_empty() {
        return Err(Error::SoundnessViolation { missing });
    }
    Ok(output
        .directed_edges()
        .filter(|&(t, h)| !truth_parent.has_directed(t, h))
        .count())
}

/// Spearman rank correlation, ties given their average rank.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewObservations { need: 2, got: xs.len() });
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let mean = (xs.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // positions i..=j share ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Indices of the `k` largest degrees; ties go to the smaller index.
pub fn top_k(deg: &[usize], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..deg.len()).collect();
    idx.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Size of the intersection of the top-`k` sets of two degree tables over
/// the same nodes.
pub fn topk_overlap(truth_deg: &[usize], out_deg: &[usize], k: usize) -> Result<usize> {
    if truth_deg.len() != out_deg.len() {
        return Err(Error::LengthMismatch { left: truth_deg.len(), right: out_deg.len() });
    }
    let a = top_k(truth_deg, k);
    let b = top_k(out_deg, k);
    Ok(a.iter().filter(|v| b.contains(v)).count())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRow {
    pub algo: String,
    pub replicate: usize,
    pub n: usize,
    pub p_dir: f64,
    pub p_bi: f64,
    pub true_directed: usize,
    pub true_bidirected: usize,
    pub excess: usize,
    pub calls: u64,
    pub ms: u64,
}

/// Writes serializable rows as CSV with a header.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
