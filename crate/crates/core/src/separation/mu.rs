use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ops::ancestors_unchecked;
use crate::graph::{Dmg, NodeSet};

/// `B` is mu-separated from `A` given `C`. `C` may overlap `A` or `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeparationQuery {
    pub a: NodeSet,
    pub b: NodeSet,
    pub c: NodeSet,
}

impl SeparationQuery {
    pub fn new(a: NodeSet, b: NodeSet, c: NodeSet) -> Self {
        SeparationQuery { a, b, c }
    }

    /// `<{alpha}, {beta} | C>`.
    pub fn pair(alpha: usize, beta: usize, c: NodeSet) -> Self {
        SeparationQuery::new(NodeSet::singleton(alpha), NodeSet::singleton(beta), c)
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::EmptyQuerySet);
        }
        for s in [&self.a, &self.b, &self.c] {
            if let Some(v) = s.iter().find(|&v| v >= n) {
                return Err(Error::UnknownNode(v));
            }
        }
        Ok(())
    }
}

/// Decides `A ⊥μ B | C` in `g`.
///
/// Reachability over states `(node, mark of the arriving edge at that node)`.
/// Passing through `v` is a collider move when both the arriving and the
/// departing edge have a head at `v`; collider moves need `v ∈ an(C)`, all
/// other moves need `v ∉ C`. Sources in `A ∩ C` are dropped. A query is
/// connected as soon as an edge with a head lands in `B`.
pub fn mu_separated(g: &Dmg, q: &SeparationQuery) -> Result<bool> {
    q.validate(g.node_count())?;
    Ok(!connected(g, q))
}

fn connected(g: &Dmg, q: &SeparationQuery) -> bool {
    let n = g.node_count();
    let an_c = ancestors_unchecked(g, &q.c);
    let mut head_seen = NodeSet::with_capacity(n);
    let mut tail_seen = NodeSet::with_capacity(n);
    // (node, arrived with head)
    let mut queue: Vec<(usize, bool)> = Vec::new();

    // Returns true when the target is hit.
    let arrive_heads = |set: &NodeSet, head_seen: &mut NodeSet, queue: &mut Vec<(usize, bool)>| {
        for w in set.iter() {
            if q.b.contains(w) {
                return true;
            }
            if head_seen.insert(w) {
                queue.push((w, true));
            }
        }
        false
    };
    let arrive_tails = |v: usize, tail_seen: &mut NodeSet, queue: &mut Vec<(usize, bool)>| {
        for w in g.parents(v).iter().filter(|&w| w != v) {
            if tail_seen.insert(w) {
                queue.push((w, false));
            }
        }
    };

    for alpha in q.a.iter().filter(|&v| !q.c.contains(v)) {
        if arrive_heads(g.children(alpha), &mut head_seen, &mut queue)
            || arrive_heads(g.siblings(alpha), &mut head_seen, &mut queue)
        {
            return true;
        }
        arrive_tails(alpha, &mut tail_seen, &mut queue);
    }

    while let Some((v, via_head)) = queue.pop() {
        let noncollider_ok = !q.c.contains(v);
        if noncollider_ok {
            // Leaving by a tail is a noncollider whatever the arrival mark.
            if arrive_heads(g.children(v), &mut head_seen, &mut queue) {
                return true;
            }
        }
        let head_departure_ok = if via_head { an_c.contains(v) } else { noncollider_ok };
        if head_departure_ok {
            if arrive_heads(g.siblings(v), &mut head_seen, &mut queue) {
                return true;
            }
            arrive_tails(v, &mut tail_seen, &mut queue);
        }
    }
    false
}
