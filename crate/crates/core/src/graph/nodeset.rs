use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

/// Index of a node within one graph. Labels are metadata held by the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense bitset of node indices.
///
/// Equality and hashing look only at the members, never at the capacity, so
/// sets built against graphs of different sizes compare as plain sets.
#[derive(Clone, Default)]
pub struct NodeSet(FixedBitSet);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(FixedBitSet::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        NodeSet(FixedBitSet::with_capacity(n))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        NodeSet(bits)
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = NodeSet::with_capacity(v + 1);
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: usize) -> bool {
        if v >= self.0.len() {
            self.0.grow(v + 1);
        }
        !self.0.put(v)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v < self.0.len() && self.0.contains(v) {
            self.0.set(v, false);
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Largest member plus one, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        self.0.maximum().map_or(0, |m| m + 1)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        if other.0.len() > self.0.len() {
            self.0.grow(other.0.len());
        }
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        self.0.difference_with(&other.0);
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &NodeSet) -> bool {
        !self.is_disjoint(other)
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for NodeSet {}

impl Hash for NodeSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in self.iter() {
            v.hash(state);
        }
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        iter.into_iter().map(NodeId::index).collect()
    }
}

impl<const N: usize> From<[usize; N]> for NodeSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl Serialize for NodeSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NodeSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        Ok(items.into_iter().collect())
    }
}
