use std::collections::BTreeMap;

use itertools::Itertools;

use super::{set_of, Action, Certificate, ScreeningOptions, Session, Stage};
use crate::error::{Error, Result};
use crate::graph::{Dmg, NodeSet};
use crate::separation::IndependenceOracle;

/// Trek step: from the complete DG, remove `alpha -> beta` whenever
/// `<alpha, beta | {beta}>` holds. Exactly `m(m-1)` queries.
pub fn trek_step<O: IndependenceOracle + ?Sized>(oracle: &O) -> Result<Dmg> {
    trek_step_with(oracle, ScreeningOptions::default())
}

pub fn trek_step_with<O: IndependenceOracle + ?Sized>(oracle: &O, options: ScreeningOptions) -> Result<Dmg> {
    let mut s = Session::complete(oracle, options)?;
    trek_pass(&mut s)?;
    Ok(s.graph.build())
}

/// Parent step: one pass over present edges `alpha -> beta`, testing
/// `<alpha, beta | pa(beta) \ {alpha}>` against the graph as edited so far.
pub fn parent_step<O: IndependenceOracle + ?Sized>(oracle: &O, d: &Dmg) -> Result<Dmg> {
    parent_step_with(oracle, d, ScreeningOptions::default())
}

pub fn parent_step_with<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    d: &Dmg,
    options: ScreeningOptions,
) -> Result<Dmg> {
    let mut s = session_on(oracle, d, options)?;
    parent_pass(&mut s)?;
    Ok(s.graph.build())
}

/// Test-free ancestry propagation: removes every `beta -> gamma` for which
/// some `alpha` has `alpha -> beta`, no `beta -> alpha`, and no
/// `alpha -> gamma`. Removals are applied together at the end.
pub fn ancestry_propagation_cheap(d: &Dmg) -> Dmg {
    let mut b = d.to_builder();
    for (beta, gamma) in cheap_removals(d) {
        b.remove_directed(beta.into(), gamma.into()).expect("distinct endpoints");
    }
    b.build()
}

/// Oracle-assisted ancestry propagation: for distinct `(alpha, beta, gamma)`
/// with `alpha` and `beta` adjacent, `beta -> gamma` and no `alpha -> gamma`,
/// tests `<alpha, gamma | {}>` and schedules `beta -> gamma` for removal when
/// it holds. Removals are applied together at the end.
pub fn ancestry_propagation<O: IndependenceOracle + ?Sized>(oracle: &O, d: &Dmg) -> Result<Dmg> {
    let mut s = session_on(oracle, d, ScreeningOptions::default())?;
    ancestry_pass(&mut s)?;
    Ok(s.graph.build())
}

fn session_on<'o, O: IndependenceOracle + ?Sized>(
    oracle: &'o O,
    d: &Dmg,
    options: ScreeningOptions,
) -> Result<Session<'o, O>> {
    d.require_dg()?;
    if d.node_count() != oracle.observed_count() {
        return Err(Error::NodeSetMismatch);
    }
    Ok(Session::on(oracle, d.to_builder(), options))
}

pub(super) fn trek_pass<O: IndependenceOracle + ?Sized>(s: &mut Session<'_, O>) -> Result<()> {
    let m = s.graph.node_count();
    for (alpha, beta) in s.options.pairs(m) {
        let c = NodeSet::singleton(beta);
        if s.oracle.independent(alpha, beta, &c)? {
            s.remove(alpha, beta, Stage::Trek, Action::Removed, Some(Certificate::Separating { set: vec![beta] }));
        } else {
            s.keep(alpha, beta, Stage::Trek);
        }
    }
    Ok(())
}

pub(super) fn parent_pass<O: IndependenceOracle + ?Sized>(s: &mut Session<'_, O>) -> Result<()> {
    let m = s.graph.node_count();
    let pairs = s.options.pairs(m);
    loop {
        let mut changed = false;
        for &(alpha, beta) in &pairs {
            if !s.graph.has_directed(alpha, beta) {
                continue;
            }
            let mut c = s.graph.parents(beta).clone();
            c.remove(alpha);
            if s.oracle.independent(alpha, beta, &c)? {
                let set = c.to_vec();
                s.remove(alpha, beta, Stage::Parent, Action::Removed, Some(Certificate::Separating { set }));
                changed = true;
            } else {
                s.keep(alpha, beta, Stage::Parent);
            }
        }
        if !(s.options.parent_fixpoint && changed) {
            return Ok(());
        }
    }
}

fn distinct_triples(m: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..m)
        .cartesian_product(0..m)
        .cartesian_product(0..m)
        .map(|((a, b), c)| (a, b, c))
        .filter(|&(a, b, c)| a != b && b != c && a != c)
}

fn cheap_removals(d: &Dmg) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = distinct_triples(d.node_count())
        .filter(|&(a, b, c)| {
            d.has_directed(a, b) && !d.has_directed(b, a) && d.has_directed(b, c) && !d.has_directed(a, c)
        })
        .map(|(_, b, c)| (b, c))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(super) fn ancestry_cheap_pass<O: IndependenceOracle + ?Sized>(s: &mut Session<'_, O>) {
    for (beta, gamma) in cheap_removals(s.graph.view()) {
        s.remove(beta, gamma, Stage::AncestryCheap, Action::Propagation, None);
    }
}

pub(super) fn ancestry_pass<O: IndependenceOracle + ?Sized>(s: &mut Session<'_, O>) -> Result<()> {
    let d = s.graph.view().clone();
    let empty = NodeSet::new();
    let mut scheduled: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (alpha, beta, gamma) in distinct_triples(d.node_count()) {
        let adjacent = d.has_directed(alpha, beta) || d.has_directed(beta, alpha);
        if adjacent
            && d.has_directed(beta, gamma)
            && !d.has_directed(alpha, gamma)
            && s.oracle.independent(alpha, gamma, &empty)?
        {
            scheduled.entry((beta, gamma)).or_insert(alpha);
        }
    }
    for ((beta, gamma), witness) in scheduled {
        s.remove(beta, gamma, Stage::Ancestry, Action::Removed, Some(Certificate::AncestryWitness { witness }));
    }
    Ok(())
}

pub(super) fn ca_search<O: IndependenceOracle + ?Sized>(s: &mut Session<'_, O>) -> Result<()> {
    let m = s.graph.node_count();
    'pairs: for (alpha, beta) in s.options.pairs(m) {
        let candidates: Vec<usize> = (0..m).filter(|&v| v != alpha).collect();
        for k in 0..=candidates.len() {
            for subset in candidates.iter().copied().combinations(k) {
                let c = set_of(subset.iter().copied());
                if s.oracle.independent(alpha, beta, &c)? {
                    s.remove(alpha, beta, Stage::Ca, Action::Removed, Some(Certificate::Separating { set: subset }));
                    continue 'pairs;
                }
            }
        }
        s.keep(alpha, beta, Stage::Ca);
    }
    Ok(())
}
