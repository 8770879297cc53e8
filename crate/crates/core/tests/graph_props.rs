mod common;

use proptest::prelude::*;

use causal_screen::graph::{ancestors, canonical_dg, directed_part, directed_trek_exists, latent_projection, parent_graph};
use causal_screen::separation::{brute_force_mu_separated, mu_separated};
use causal_screen::{Dmg, NodeId, NodeSet, SeparationQuery};
use common::{dmg, dmg_with_observed, is_ancestor, subsets};

#[derive(Clone, Copy, PartialEq)]
enum End {
    Head,
    Tail,
}

/// Colliderless simple paths from `a` to `b` whose last edge points into `b`.
fn brute_directed_trek(g: &Dmg, a: usize, b: usize) -> bool {
    // (neighbour, mark at current node, mark at neighbour)
    let steps = |v: usize| {
        let mut out = Vec::new();
        for w in g.children(v).iter().filter(|&w| w != v) {
            out.push((w, End::Tail, End::Head));
        }
        for w in g.parents(v).iter().filter(|&w| w != v) {
            out.push((w, End::Head, End::Tail));
        }
        for w in g.siblings(v).iter() {
            out.push((w, End::Head, End::Head));
        }
        out
    };
    fn go(
        v: usize,
        arrived: Option<End>,
        b: usize,
        visited: &mut Vec<bool>,
        steps: &dyn Fn(usize) -> Vec<(usize, End, End)>,
    ) -> bool {
        for (w, here, there) in steps(v) {
            if arrived == Some(End::Head) && here == End::Head {
                continue;
            }
            if w == b {
                if there == End::Head {
                    return true;
                }
                continue;
            }
            if visited[w] {
                continue;
            }
            visited[w] = true;
            if go(w, Some(there), b, visited, steps) {
                return true;
            }
            visited[w] = false;
        }
        false
    }
    if a == b {
        return false;
    }
    let mut visited = vec![false; g.node_count()];
    visited[a] = true;
    go(a, None, b, &mut visited, &steps)
}

fn has_all_loops(g: &Dmg) -> bool {
    (0..g.node_count()).all(|v| g.has_directed(v, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn constructions_keep_loops((g, o) in dmg_with_observed(6, true)) {
        prop_assert!(has_all_loops(&g));
        prop_assert!(has_all_loops(&latent_projection(&g, &o).unwrap()));
        prop_assert!(has_all_loops(&canonical_dg(&g).0));
        let (canon, _) = canonical_dg(&g);
        prop_assert!(has_all_loops(&parent_graph(&canon, &o).unwrap()));
    }

    #[test]
    fn trek_search_matches_path_enumeration(g in dmg(6, true)) {
        for a in 0..g.node_count() {
            for b in 0..g.node_count() {
                prop_assert_eq!(
                    directed_trek_exists(&g, NodeId(a), NodeId(b)).unwrap(),
                    brute_directed_trek(&g, a, b),
                    "pair ({}, {})", a, b
                );
            }
        }
    }

    #[test]
    fn parent_graph_is_directed_part_of_projection((d, o) in dmg_with_observed(8, false)) {
        let pg = parent_graph(&d, &o).unwrap();
        prop_assert_eq!(&pg, &directed_part(&latent_projection(&d, &o).unwrap()));
    }

    #[test]
    fn ancestry_agrees_with_projection((d, o) in dmg_with_observed(8, false)) {
        let dp = directed_part(&latent_projection(&d, &o).unwrap());
        let obs = o.to_vec();
        for (la, &a) in obs.iter().enumerate() {
            let an_a = ancestors(&d, &NodeSet::singleton(a)).unwrap();
            for (lb, &b) in obs.iter().enumerate() {
                prop_assert_eq!(is_ancestor(&d, b, a), an_a.contains(b));
                prop_assert_eq!(is_ancestor(&d, b, a), is_ancestor(&dp, lb, la));
            }
        }
    }

    #[test]
    fn projection_is_idempotent((g, o) in dmg_with_observed(7, true)) {
        let m = latent_projection(&g, &o).unwrap();
        let all = m.all_nodes();
        prop_assert_eq!(&latent_projection(&m, &all).unwrap(), &m);
    }

    #[test]
    fn projection_preserves_separation((g, o) in dmg_with_observed(5, true)) {
        let m = latent_projection(&g, &o).unwrap();
        let obs = o.to_vec();
        let local = |s: &NodeSet| -> NodeSet { s.iter().map(|v| obs.iter().position(|&x| x == v).unwrap()).collect() };
        for &a in &obs {
            let rest: Vec<usize> = obs.iter().copied().filter(|&v| v != a).collect();
            for &b in &obs {
                for c in subsets(&rest) {
                    let q = SeparationQuery::pair(a, b, c.clone());
                    let lq = SeparationQuery::new(
                        local(&NodeSet::singleton(a)),
                        local(&NodeSet::singleton(b)),
                        local(&c),
                    );
                    prop_assert_eq!(brute_force_mu_separated(&g, &q).unwrap(), mu_separated(&m, &lq).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_dg_preserves_separation(g in dmg(5, true)) {
        let (canon, o) = canonical_dg(&g);
        prop_assert!(canon.is_dg());
        prop_assert_eq!(o.to_vec(), (0..g.node_count()).collect::<Vec<_>>());
        for a in 0..g.node_count() {
            let rest: Vec<usize> = (0..g.node_count()).filter(|&v| v != a).collect();
            for b in 0..g.node_count() {
                for c in subsets(&rest) {
                    let q = SeparationQuery::pair(a, b, c);
                    prop_assert_eq!(brute_force_mu_separated(&g, &q).unwrap(), mu_separated(&canon, &q).unwrap());
                }
            }
        }
    }
}
