#![allow(dead_code)]

use proptest::prelude::*;

use causal_screen::{Dmg, DmgBuilder, NodeId, NodeSet};

/// A DMG on `1..=max_n` nodes; `bidirected = false` gives a DG.
pub fn dmg(max_n: usize, bidirected: bool) -> impl Strategy<Value = Dmg> {
    (1..=max_n).prop_flat_map(move |n| {
        let bi = if bidirected { n * n } else { 0 };
        (prop::collection::vec(prop::bool::weighted(0.3), n * n), prop::collection::vec(prop::bool::weighted(0.2), bi))
            .prop_map(move |(dir, bis)| build(n, &dir, &bis))
    })
}

/// A graph together with a nonempty observed subset.
pub fn dmg_with_observed(max_n: usize, bidirected: bool) -> impl Strategy<Value = (Dmg, NodeSet)> {
    dmg(max_n, bidirected).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(any::<bool>(), n), 0..n).prop_map(|(g, keep, forced)| {
            let mut o: NodeSet = (0..g.node_count()).filter(|&v| keep[v]).collect();
            o.insert(forced);
            (g, o)
        })
    })
}

fn build(n: usize, dir: &[bool], bis: &[bool]) -> Dmg {
    let mut b = DmgBuilder::with_nodes(n);
    for a in 0..n {
        for c in 0..n {
            if a != c && dir[a * n + c] {
                b.add_directed(NodeId(a), NodeId(c)).unwrap();
            }
            if a < c && bis.get(a * n + c).copied().unwrap_or(false) {
                b.add_bidirected(NodeId(a), NodeId(c)).unwrap();
            }
        }
    }
    b.build()
}

pub fn subsets(universe: &[usize]) -> Vec<NodeSet> {
    (0u32..1 << universe.len())
        .map(|mask| universe.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &v)| v).collect())
        .collect()
}

/// Does a directed path from `a` to `b` exist all of whose nodes avoid `blocked`
/// (endpoints excepted)? Plain DFS over simple paths.
pub fn directed_path_avoiding(g: &Dmg, a: usize, b: usize, blocked: &NodeSet) -> bool {
    fn go(g: &Dmg, v: usize, b: usize, blocked: &NodeSet, seen: &mut Vec<bool>) -> bool {
        for w in g.children(v).iter() {
            if w == b {
                return true;
            }
            if !seen[w] && !blocked.contains(w) {
                seen[w] = true;
                if go(g, w, b, blocked, seen) {
                    return true;
                }
            }
        }
        false
    }
    let mut seen = vec![false; g.node_count()];
    seen[a] = true;
    go(g, a, b, blocked, &mut seen)
}

/// Reachability through directed edges, reflexive.
pub fn is_ancestor(g: &Dmg, a: usize, b: usize) -> bool {
    a == b || directed_path_avoiding(g, a, b, &NodeSet::new())
}
