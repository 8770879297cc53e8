use serde::Serialize;

use super::{Dmg, NodeSet};

/// Edge-end mark at a node occurrence on a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mark {
    Head,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeKind {
    Directed,
    Bidirected,
}

/// One oriented edge traversal `from --edge--> to` with the marks the edge
/// carries at both occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WalkStep {
    pub kind: EdgeKind,
    pub from: usize,
    pub from_mark: Mark,
    pub to: usize,
    pub to_mark: Mark,
}

/// Every way of leaving `v` along one edge.
///
/// A loop `v -> v` is traversed only as tail-departure, head-arrival.
pub fn traversals(g: &Dmg, v: usize) -> impl Iterator<Item = WalkStep> + '_ {
    let out = g.children(v).iter().map(move |to| WalkStep {
        kind: EdgeKind::Directed,
        from: v,
        from_mark: Mark::Tail,
        to,
        to_mark: Mark::Head,
    });
    let inc = g.parents(v).iter().filter(move |&p| p != v).map(move |to| WalkStep {
        kind: EdgeKind::Directed,
        from: v,
        from_mark: Mark::Head,
        to,
        to_mark: Mark::Tail,
    });
    let bi = g.siblings(v).iter().map(move |to| WalkStep {
        kind: EdgeKind::Bidirected,
        from: v,
        from_mark: Mark::Head,
        to,
        to_mark: Mark::Head,
    });
    out.chain(inc).chain(bi)
}

/// A walk given by its start node and oriented edge traversals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<WalkStep>,
}

impl Walk {
    pub fn trivial(start: usize) -> Self {
        Walk { start, steps: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    /// Node sequence, endpoints included.
    pub fn nodes(&self) -> Vec<usize> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to)).collect()
    }

    /// Steps chain up and each edge exists in `g`.
    pub fn is_valid_in(&self, g: &Dmg) -> bool {
        let mut at = self.start;
        for s in &self.steps {
            if s.from != at || !traversals(g, at).any(|t| t == *s) {
                return false;
            }
            at = s.to;
        }
        true
    }

    /// Whether the intermediate node between steps `i` and `i + 1` is a collider.
    pub fn is_collider_at(&self, i: usize) -> bool {
        self.steps[i].to_mark == Mark::Head && self.steps[i + 1].from_mark == Mark::Head
    }

    /// Checks the mu-connecting conditions directly: nontrivial, start not
    /// in `c`, head at an end in `targets`, colliders in `an_c`, noncolliders
    /// outside `c`.
    pub fn is_mu_connecting(&self, targets: &NodeSet, c: &NodeSet, an_c: &NodeSet) -> bool {
        let Some(last) = self.steps.last() else {
            return false;
        };
        if c.contains(self.start) || last.to_mark != Mark::Head || !targets.contains(last.to) {
            return false;
        }
        (0..self.steps.len() - 1).all(|i| {
            let v = self.steps[i].to;
            if self.is_collider_at(i) {
                an_c.contains(v)
            } else {
                !c.contains(v)
            }
        })
    }

    /// Path: no node repeats.
    pub fn is_path(&self) -> bool {
        let nodes = self.nodes();
        let mut seen = NodeSet::new();
        nodes.into_iter().all(|v| seen.insert(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::chain3;

    #[test]
    fn loop_traversal_orientation() {
        let g = Dmg::empty(1);
        let steps: Vec<_> = traversals(&g, 0).collect();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].from_mark, Mark::Tail);
        assert_eq!(steps[0].to_mark, Mark::Head);
    }

    #[test]
    fn chain_walk_connecting() {
        let g = chain3();
        let w = Walk {
            start: 0,
            steps: vec![
                traversals(&g, 0).find(|s| s.to == 1).unwrap(),
                traversals(&g, 1).find(|s| s.to == 2).unwrap(),
            ],
        };
        assert!(w.is_valid_in(&g));
        assert!(w.is_path());
        let targets = NodeSet::from([2]);
        assert!(w.is_mu_connecting(&targets, &NodeSet::new(), &NodeSet::new()));
        // b is a noncollider and blocks when conditioned on
        let c = NodeSet::from([1]);
        assert!(!w.is_mu_connecting(&targets, &c, &NodeSet::from([0, 1])));
        assert!(!Walk::trivial(0).is_mu_connecting(&targets, &NodeSet::new(), &NodeSet::new()));
    }
}
