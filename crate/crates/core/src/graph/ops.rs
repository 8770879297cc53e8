//! Ancestry, treks, parent graphs and latent projection.

use super::{Dmg, DmgBuilder, NodeId, NodeSet, ObservedSet};
use crate::error::Result;

/// `an(C)`: every node with a directed path into `C`. Reflexive because of loops.
pub fn ancestors(g: &Dmg, c: &NodeSet) -> Result<NodeSet> {
    g.check_subset(c)?;
    Ok(ancestors_unchecked(g, c))
}

pub(crate) fn ancestors_unchecked(g: &Dmg, c: &NodeSet) -> NodeSet {
    ancestors_avoiding(g, c, None)
}

/// Ancestors of `seeds` along directed paths that never enter `avoid`.
fn ancestors_avoiding(g: &Dmg, seeds: &NodeSet, avoid: Option<usize>) -> NodeSet {
    let mut seen = NodeSet::with_capacity(g.node_count());
    let mut stack: Vec<usize> = seeds.iter().filter(|&v| Some(v) != avoid).collect();
    for &v in &stack {
        seen.insert(v);
    }
    while let Some(v) = stack.pop() {
        for p in g.parents(v).iter() {
            if Some(p) != avoid && seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

/// Builds a graph on the nodes of `o` (in increasing index order), keeping
/// their labels. Returns the builder and the map from old to new index.
fn restricted_builder(g: &Dmg, o: &NodeSet) -> (DmgBuilder, Vec<Option<usize>>) {
    let mut local = vec![None; g.node_count()];
    let mut b = DmgBuilder::new();
    for v in o.iter() {
        let id = b.add_node(g.labels()[v].clone()).expect("labels unique in source graph");
        local[v] = Some(id.index());
    }
    (b, local)
}

/// The parent graph of a DG on `o`: `a -> b` iff a directed path from `a` to
/// `b` exists whose intermediate nodes are all unobserved.
///
/// Nodes of the result are the members of `o` in increasing index order.
pub fn parent_graph(d: &Dmg, o: &ObservedSet) -> Result<Dmg> {
    d.require_dg()?;
    d.check_subset(o)?;
    let (mut b, local) = restricted_builder(d, o);
    let mut stack = Vec::new();
    for a in o.iter() {
        let la = local[a].expect("a in o");
        let mut seen = NodeSet::with_capacity(d.node_count());
        stack.push(a);
        while let Some(v) = stack.pop() {
            for w in d.children(v).iter() {
                if let Some(lw) = local[w] {
                    b.insert_directed(la, lw);
                } else if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    Ok(b.build())
}

/// Latent projection `m(G, O)`.
///
/// Latent nodes are marginalized one at a time in increasing index order.
/// Removing `u` adds `p -> c` for every `p -> u -> c`, and `x <-> y` for every
/// pair of distinct edge ends meeting at `u` as a noncollider with heads
/// pointing away from `u` (`x <- u -> y`, `x <-> u -> y`). Collider
/// compositions are dropped: a collider at a latent ancestor of the
/// conditioning set can always be rerouted through that conditioning node.
/// Bidirected loops would duplicate what the directed loops already provide
/// and are not kept.
pub fn latent_projection(g: &Dmg, o: &ObservedSet) -> Result<Dmg> {
    g.check_subset(o)?;
    let n = g.node_count();
    let mut parents: Vec<NodeSet> = (0..n).map(|v| g.parents(v).clone()).collect();
    let mut children: Vec<NodeSet> = (0..n).map(|v| g.children(v).clone()).collect();
    let mut siblings: Vec<NodeSet> = (0..n).map(|v| g.siblings(v).clone()).collect();

    for u in (0..n).filter(|&u| !o.contains(u)) {
        let mut pa = parents[u].clone();
        pa.remove(u);
        let mut ch = children[u].clone();
        ch.remove(u);
        let sib = siblings[u].clone();

        for p in pa.iter() {
            for c in ch.iter() {
                children[p].insert(c);
                parents[c].insert(p);
            }
        }
        let heads: Vec<usize> = ch.iter().collect();
        for (i, &x) in heads.iter().enumerate() {
            for &y in &heads[i + 1..] {
                siblings[x].insert(y);
                siblings[y].insert(x);
            }
            for s in sib.iter().filter(|&s| s != x) {
                siblings[x].insert(s);
                siblings[s].insert(x);
            }
        }

        for p in pa.iter() {
            children[p].remove(u);
        }
        for c in ch.iter() {
            parents[c].remove(u);
        }
        for s in sib.iter() {
            siblings[s].remove(u);
        }
        parents[u] = NodeSet::singleton(u);
        children[u] = NodeSet::singleton(u);
        siblings[u] = NodeSet::new();
    }

    let (mut b, local) = restricted_builder(g, o);
    for t in o.iter() {
        let lt = local[t].expect("t in o");
        for h in children[t].iter() {
            b.insert_directed(lt, local[h].expect("latent nodes eliminated"));
        }
        for s in siblings[t].iter().filter(|&s| s > t) {
            b.insert_bidirected(lt, local[s].expect("latent nodes eliminated"));
        }
    }
    Ok(b.build())
}

/// Drops all bidirected edges.
pub fn directed_part(g: &Dmg) -> Dmg {
    let mut b = g.to_builder();
    b.clear_bidirected();
    b.build()
}

/// Replaces each bidirected edge `a <-> b` by a fresh latent `u` with
/// `u -> a`, `u -> b`. The returned set holds the original nodes, which keep
/// their indices; latents are appended in lexicographic edge order.
pub fn canonical_dg(g: &Dmg) -> (Dmg, ObservedSet) {
    let mut b = directed_part(g).to_builder();
    for (x, y) in g.bidirected_edges() {
        let base = format!("L[{}<->{}]", g.labels()[x], g.labels()[y]);
        let mut label = base.clone();
        let mut k = 1;
        while b.node_by_label(&label).is_ok() {
            label = format!("{base}#{k}");
            k += 1;
        }
        let u = b.add_node(label).expect("label made unique");
        b.insert_directed(u.index(), x);
        b.insert_directed(u.index(), y);
    }
    (b.build(), g.all_nodes())
}

/// Whether some trek between `alpha` and `beta` is directed from `alpha`
/// to `beta`, i.e. `alpha` is in `dt(beta)`. Loops play no part.
///
/// Such a trek exists iff either a node `t != beta` reaches `alpha` by a
/// directed path avoiding `beta` and also reaches `beta`, or `x <-> y` with
/// `x` reaching `alpha` while avoiding `beta` and `y` reaching `beta`.
/// Overlapping path pairs can be cut at their last shared node, which
/// reduces them to the first case.
pub fn directed_trek_exists(g: &Dmg, alpha: NodeId, beta: NodeId) -> Result<bool> {
    g.check_node(alpha)?;
    g.check_node(beta)?;
    if alpha == beta {
        return Ok(false);
    }
    let (a, b) = (alpha.index(), beta.index());
    let an_alpha = ancestors_avoiding(g, &NodeSet::singleton(a), Some(b));
    let an_beta = ancestors_unchecked(g, &NodeSet::singleton(b));
    let shared_top = an_alpha.iter().any(|t| an_beta.contains(t));
    if shared_top {
        return Ok(true);
    }
    let confounded = an_alpha.iter().any(|x| g.siblings(x).intersects(&an_beta));
    Ok(confounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{chain3, six_node};
    use crate::graph::walk::{traversals, Mark};

    fn set(g: &Dmg, labels: &[&str]) -> NodeSet {
        g.resolve_labels(labels).unwrap()
    }

    fn edges(g: &Dmg) -> Vec<(String, String)> {
        g.directed_edges()
            .map(|(t, h)| (g.labels()[t].clone(), g.labels()[h].clone()))
            .collect()
    }

    fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
        p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    /// Brute-force enumeration of colliderless paths from `a` ending with a
    /// head at `b`, ignoring loops.
    fn brute_trek(g: &Dmg, a: usize, b: usize) -> bool {
        fn go(g: &Dmg, path: &mut Vec<usize>, last_mark: Option<Mark>, b: usize) -> bool {
            let v = *path.last().unwrap();
            for s in traversals(g, v).filter(|s| s.to != s.from) {
                if path.contains(&s.to) {
                    continue;
                }
                if last_mark == Some(Mark::Head) && s.from_mark == Mark::Head {
                    continue;
                }
                if s.to == b {
                    if s.to_mark == Mark::Head {
                        return true;
                    }
                    continue;
                }
                path.push(s.to);
                if go(g, path, Some(s.to_mark), b) {
                    return true;
                }
                path.pop();
            }
            false
        }
        a != b && go(g, &mut vec![a], None, b)
    }

    #[test]
    fn ancestors_examples() {
        let g = chain3();
        assert_eq!(ancestors(&g, &NodeSet::from([2])).unwrap(), NodeSet::from([0, 1, 2]));
        assert!(ancestors(&g, &NodeSet::new()).unwrap().is_empty());
        assert!(ancestors(&g, &NodeSet::from([7])).is_err());

        let f = six_node();
        let an = ancestors(&f, &set(&f, &["delta"])).unwrap();
        assert_eq!(an, set(&f, &["alpha", "beta", "gamma", "phi", "delta"]));
    }

    #[test]
    fn parent_graph_examples() {
        let f = six_node();
        let o = set(&f, &["alpha", "delta", "epsilon"]);
        let p = parent_graph(&f, &o).unwrap();
        assert_eq!(p.labels(), ["alpha", "delta", "epsilon"]);
        assert_eq!(edges(&p), pairs(&[("alpha", "delta"), ("delta", "epsilon")]));

        assert_eq!(parent_graph(&f, &f.all_nodes()).unwrap(), f);

        let c = chain3();
        let p = parent_graph(&c, &NodeSet::from([0, 2])).unwrap();
        assert_eq!(edges(&p), pairs(&[("a", "c")]));

        assert!(parent_graph(&c, &NodeSet::from([0, 9])).is_err());
        let mut b = c.to_builder();
        b.add_bidirected(NodeId(0), NodeId(2)).unwrap();
        assert!(parent_graph(&b.build(), &NodeSet::from([0])).is_err());
    }

    #[test]
    fn latent_projection_examples() {
        let c = chain3();
        let m = latent_projection(&c, &NodeSet::from([0, 2])).unwrap();
        assert_eq!(edges(&m), pairs(&[("a", "c")]));
        assert_eq!(m.bidirected_count(), 0);

        let mut b = DmgBuilder::from_labels(["l", "a", "b"]).unwrap();
        b.add_directed(NodeId(0), NodeId(1)).unwrap();
        b.add_directed(NodeId(0), NodeId(2)).unwrap();
        let fork = b.build();
        let m = latent_projection(&fork, &NodeSet::from([1, 2])).unwrap();
        assert_eq!(m.directed_count(), 0);
        assert_eq!(m.bidirected_edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let f = six_node();
        let o = set(&f, &["alpha", "delta", "epsilon"]);
        let m = latent_projection(&f, &o).unwrap();
        assert_eq!(directed_part(&m), parent_graph(&f, &o).unwrap());
        assert_eq!(m.bidirected_edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn directed_part_examples() {
        let mut b = DmgBuilder::with_nodes(2);
        b.add_bidirected(NodeId(0), NodeId(1)).unwrap();
        let g = b.build();
        assert_eq!(directed_part(&g), Dmg::empty(2));
        let f = six_node();
        assert_eq!(directed_part(&f), f);
    }

    #[test]
    fn canonical_dg_examples() {
        let mut b = DmgBuilder::from_labels(["a", "b"]).unwrap();
        b.add_bidirected(NodeId(0), NodeId(1)).unwrap();
        let (d, o) = canonical_dg(&b.build());
        assert!(d.is_dg());
        assert_eq!(d.node_count(), 3);
        assert_eq!(o, NodeSet::from([0, 1]));
        assert!(d.has_directed(2, 0) && d.has_directed(2, 1) && d.has_directed(2, 2));

        let f = six_node();
        let (d, o) = canonical_dg(&f);
        assert_eq!(d, f);
        assert_eq!(o, f.all_nodes());
    }

    #[test]
    fn trek_examples() {
        let c = chain3();
        assert!(directed_trek_exists(&c, NodeId(0), NodeId(2)).unwrap());
        assert!(!directed_trek_exists(&c, NodeId(2), NodeId(0)).unwrap());
        assert!(!directed_trek_exists(&Dmg::empty(2), NodeId(0), NodeId(1)).unwrap());

        let f = six_node();
        let eps = f.node_by_label("epsilon").unwrap();
        // A trek is a path, so epsilon itself is never in dt(epsilon).
        let observed = ["alpha", "delta", "epsilon"];
        let brute: Vec<&str> = observed
            .into_iter()
            .filter(|l| brute_trek(&f, f.node_by_label(l).unwrap().index(), eps.index()))
            .collect();
        assert_eq!(brute, ["alpha", "delta"]);
        let fast: Vec<&str> = observed
            .into_iter()
            .filter(|l| directed_trek_exists(&f, f.node_by_label(l).unwrap(), eps).unwrap())
            .collect();
        assert_eq!(fast, brute);
    }

    #[test]
    fn trek_path_constraint() {
        // t -> b -> a with t -> b: the only candidate walk repeats b.
        let mut b = DmgBuilder::from_labels(["a", "b", "t"]).unwrap();
        b.add_directed(NodeId(2), NodeId(1)).unwrap();
        b.add_directed(NodeId(1), NodeId(0)).unwrap();
        let g = b.build();
        assert!(!directed_trek_exists(&g, NodeId(0), NodeId(1)).unwrap());
        assert!(!brute_trek(&g, 0, 1));
        assert!(directed_trek_exists(&g, NodeId(1), NodeId(0)).unwrap());
    }

    pub(crate) fn small_graphs() -> impl proptest::strategy::Strategy<Value = Dmg> {
        use proptest::prelude::*;
        (1usize..=6).prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * n),
                proptest::collection::vec(prop::bool::weighted(0.3), n * n),
            )
                .prop_map(|(n, dir, bi)| {
                    let mut b = DmgBuilder::with_nodes(n);
                    for t in 0..n {
                        for h in 0..n {
                            if dir[t * n + h] {
                                b.insert_directed(t, h);
                            }
                            if t < h && bi[t * n + h] {
                                b.insert_bidirected(t, h);
                            }
                        }
                    }
                    b.build()
                })
        })
    }

    proptest::proptest! {
        #[test]
        fn trek_matches_brute_force(g in small_graphs()) {
            for a in 0..g.node_count() {
                for b in 0..g.node_count() {
                    let fast = directed_trek_exists(&g, NodeId(a), NodeId(b)).unwrap();
                    proptest::prop_assert_eq!(fast, brute_trek(&g, a, b), "pair ({}, {})", a, b);
                }
            }
        }

        #[test]
        fn projection_is_idempotent(g in small_graphs(), mask in 0u32..64) {
            let o: NodeSet = (0..g.node_count()).filter(|v| mask & (1 << v) != 0).collect();
            let m = latent_projection(&g, &o).unwrap();
            let again = latent_projection(&m, &m.all_nodes()).unwrap();
            proptest::prop_assert_eq!(&again, &m);
            for v in 0..m.node_count() {
                proptest::prop_assert!(m.has_directed(v, v));
                proptest::prop_assert!(!m.has_bidirected(v, v));
            }
        }
    }
}
