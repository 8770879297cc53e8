//! Walk-enumeration check of mu-separation, used to cross-validate the
//! state search. Exponential; refuses graphs above a node cap.

use super::SeparationQuery;
use crate::error::{Error, Result};
use crate::graph::ops::ancestors_unchecked;
use crate::graph::walk::{traversals, Mark, Walk, WalkStep};
use crate::graph::{Dmg, NodeSet};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 6;

/// `A ⊥μ B | C` by enumerating walks of at most `2|V| + 1` edges.
pub fn brute_force_mu_separated(g: &Dmg, q: &SeparationQuery) -> Result<bool> {
    brute_force_mu_separated_capped(g, q, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_mu_separated_capped(g: &Dmg, q: &SeparationQuery, cap: usize) -> Result<bool> {
    Ok(find_mu_connecting_walk(g, q, cap)?.is_none())
}

/// Returns a mu-connecting walk from `A` to `B` given `C`, if one exists.
///
/// Walks are extended edge by edge; a prefix is abandoned once one of its
/// intermediate nodes violates the collider/noncollider rule, and walks that
/// revisit a `(node, arrival mark)` pair are skipped. Skipping loses nothing:
/// cutting out the segment between the two visits keeps the walk connecting.
pub fn find_mu_connecting_walk(g: &Dmg, q: &SeparationQuery, cap: usize) -> Result<Option<Walk>> {
    q.validate(g.node_count())?;
    if g.node_count() > cap {
        return Err(Error::BruteForceCap { nodes: g.node_count(), cap });
    }
    let an_c = ancestors_unchecked(g, &q.c);
    let max_len = 2 * g.node_count() + 1;
    let mut search = Search { g, q, an_c: &an_c, max_len, steps: Vec::new() };
    for alpha in q.a.iter().filter(|&v| !q.c.contains(v)) {
        if search.extend(alpha) {
            let walk = Walk { start: alpha, steps: search.steps };
            debug_assert!(walk.is_mu_connecting(&q.b, &q.c, &an_c));
            return Ok(Some(walk));
        }
    }
    Ok(None)
}

struct Search<'a> {
    g: &'a Dmg,
    q: &'a SeparationQuery,
    an_c: &'a NodeSet,
    max_len: usize,
    steps: Vec<WalkStep>,
}

impl Search<'_> {
    /// Tries every extension of the current walk, which ends at `v`.
    fn extend(&mut self, v: usize) -> bool {
        if self.steps.len() == self.max_len {
            return false;
        }
        let arrival = self.steps.last().map(|s| s.to_mark);
        for step in traversals(self.g, v) {
            if let Some(arrived) = arrival {
                let collider = arrived == Mark::Head && step.from_mark == Mark::Head;
                let open = if collider { self.an_c.contains(v) } else { !self.q.c.contains(v) };
                if !open {
                    continue;
                }
            }
            if self
                .steps
                .iter()
                .any(|s| s.to == step.to && s.to_mark == step.to_mark)
            {
                continue;
            }
            self.steps.push(step);
            if step.to_mark == Mark::Head && self.q.b.contains(step.to) {
                return true;
            }
            if self.extend(step.to) {
                return true;
            }
            self.steps.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{chain3, six_node};
    use crate::separation::mu_separated;

    #[test]
    fn chain_examples() {
        let g = chain3();
        assert!(brute_force_mu_separated(&g, &SeparationQuery::pair(0, 2, NodeSet::from([1]))).unwrap());
        let w = find_mu_connecting_walk(&g, &SeparationQuery::pair(0, 2, NodeSet::new()), 6)
            .unwrap()
            .unwrap();
        assert!(w.is_valid_in(&g));
        assert_eq!(w.end(), 2);
        assert!(w.is_mu_connecting(&NodeSet::from([2]), &NodeSet::new(), &NodeSet::new()));
    }

    #[test]
    fn single_node_loop_connects() {
        let g = Dmg::empty(1);
        assert!(!brute_force_mu_separated(&g, &SeparationQuery::pair(0, 0, NodeSet::new())).unwrap());
    }

    #[test]
    fn source_in_conditioning_set_is_separated() {
        let g = six_node();
        for b in 0..g.node_count() {
            let q = SeparationQuery::pair(0, b, NodeSet::from([0]));
            assert!(brute_force_mu_separated(&g, &q).unwrap());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Dmg::empty(7);
        let q = SeparationQuery::pair(0, 1, NodeSet::new());
        assert!(matches!(
            brute_force_mu_separated(&g, &q),
            Err(Error::BruteForceCap { nodes: 7, cap: 6 })
        ));
        assert!(brute_force_mu_separated_capped(&g, &q, 7).unwrap());
    }

    #[test]
    fn agrees_on_six_node() {
        let g = six_node();
        let n = g.node_count();
        for a in 0..n {
            for b in 0..n {
                for mask in 0u32..(1 << n) {
                    let c: NodeSet = (0..n).filter(|v| mask & (1 << v) != 0).collect();
                    let q = SeparationQuery::pair(a, b, c);
                    assert_eq!(
                        mu_separated(&g, &q).unwrap(),
                        brute_force_mu_separated(&g, &q).unwrap(),
                        "{q:?}"
                    );
                }
            }
        }
    }
}
