//! Directed mixed graphs with mandatory self-loops.
//!
//! A [`Dmg`] is frozen once built. Every node carries its loop `v -> v`; the
//! loop is inserted when the node is created and cannot be removed. Edge
//! counts reported by the graph never include loops.

mod nodeset;
pub mod io;
pub mod ops;
pub mod walk;

use std::collections::HashMap;

pub use nodeset::{NodeId, NodeSet};
pub use ops::{
    ancestors, canonical_dg, directed_part, directed_trek_exists, latent_projection,
    parent_graph,
};
pub use walk::{EdgeKind, Mark, Walk, WalkStep};

use crate::error::{Error, Result};

/// Subset of a graph's nodes that is observed.
pub type ObservedSet = NodeSet;

/// A directed mixed graph. A DG is a `Dmg` without bidirected edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dmg {
    labels: Vec<String>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    siblings: Vec<NodeSet>,
}

impl Dmg {
    /// `n` nodes labelled `"0"`, `"1"`, ... with loops only.
    pub fn empty(n: usize) -> Dmg {
        DmgBuilder::with_nodes(n).build()
    }

    /// The complete DG on `n` nodes: every ordered pair, loops included.
    pub fn complete(labels: &[String]) -> Result<Dmg> {
        let mut b = DmgBuilder::from_labels(labels.iter().cloned())?;
        let n = labels.len();
        for a in 0..n {
            for h in 0..n {
                b.insert_directed(a, h);
            }
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.0]
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(NodeId)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Resolves a list of labels into a node set.
    pub fn resolve_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<NodeSet> {
        let mut set = NodeSet::with_capacity(self.node_count());
        for l in labels {
            set.insert(self.node_by_label(l.as_ref())?.0);
        }
        Ok(set)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.0))
        }
    }

    pub fn check_subset(&self, set: &NodeSet) -> Result<()> {
        match set.iter().find(|&v| v >= self.node_count()) {
            Some(v) => Err(Error::UnknownNode(v)),
            None => Ok(()),
        }
    }

    /// Parents of `v`, including `v` itself through its loop.
    #[inline]
    pub fn parents(&self, v: usize) -> &NodeSet {
        &self.parents[v]
    }

    /// Children of `v`, including `v` itself.
    #[inline]
    pub fn children(&self, v: usize) -> &NodeSet {
        &self.children[v]
    }

    /// Nodes joined to `v` by a bidirected edge.
    #[inline]
    pub fn siblings(&self, v: usize) -> &NodeSet {
        &self.siblings[v]
    }

    #[inline]
    pub fn has_directed(&self, tail: usize, head: usize) -> bool {
        self.children[tail].contains(head)
    }

    #[inline]
    pub fn has_bidirected(&self, a: usize, b: usize) -> bool {
        self.siblings[a].contains(b)
    }

    /// Non-loop directed edges as `(tail, head)` in lexicographic order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |t| {
            self.children[t].iter().filter(move |&h| h != t).map(move |h| (t, h))
        })
    }

    /// Bidirected edges as `(a, b)` with `a < b`.
    pub fn bidirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |a| self.siblings[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    /// Directed edge count, loops excluded.
    pub fn directed_count(&self) -> usize {
        self.directed_edges().count()
    }

    pub fn bidirected_count(&self) -> usize {
        self.bidirected_edges().count()
    }

    pub fn is_dg(&self) -> bool {
        self.siblings.iter().all(NodeSet::is_empty)
    }

    pub fn require_dg(&self) -> Result<()> {
        match self.bidirected_count() {
            0 => Ok(()),
            k => Err(Error::NotADirectedGraph(k)),
        }
    }

    /// In-degree without the loop.
    pub fn in_degree(&self, v: usize) -> usize {
        self.parents[v].len() - 1
    }

    /// Out-degree without the loop.
    pub fn out_degree(&self, v: usize) -> usize {
        self.children[v].len() - 1
    }

    /// True when every non-loop directed edge of `self` is present in `other`
    /// (same node indexing assumed).
    pub fn directed_subgraph_of(&self, other: &Dmg) -> bool {
        self.node_count() == other.node_count()
            && self.directed_edges().all(|(t, h)| other.has_directed(t, h))
    }

    pub fn to_builder(&self) -> DmgBuilder {
        DmgBuilder {
            graph: self.clone(),
            index: self
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i))
                .collect(),
        }
    }
}

/// Single-owner mutable graph. Freezing with [`DmgBuilder::build`] yields a [`Dmg`].
#[derive(Clone, Debug, Default)]
pub struct DmgBuilder {
    graph: Dmg,
    index: HashMap<String, usize>,
}

impl DmgBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` nodes labelled by their index.
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.add_node(i.to_string()).expect("index labels are unique");
        }
        b
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = Self::new();
        for l in labels {
            b.add_node(l)?;
        }
        Ok(b)
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Adds a node together with its loop.
    pub fn add_node(&mut self, label: impl Into<String>) -> Result<NodeId> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let v = self.graph.labels.len();
        self.index.insert(label.clone(), v);
        self.graph.labels.push(label);
        let g = &mut self.graph;
        g.parents.push(NodeSet::singleton(v));
        g.children.push(NodeSet::singleton(v));
        g.siblings.push(NodeSet::new());
        Ok(NodeId(v))
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .map(NodeId)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Returns the node with this label, creating it if needed.
    pub fn ensure_node(&mut self, label: &str) -> NodeId {
        match self.index.get(label) {
            Some(&v) => NodeId(v),
            None => self.add_node(label).expect("label checked absent"),
        }
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    pub fn add_directed(&mut self, tail: NodeId, head: NodeId) -> Result<&mut Self> {
        self.check(tail.0)?;
        self.check(head.0)?;
        self.insert_directed(tail.0, head.0);
        Ok(self)
    }

    pub fn add_bidirected(&mut self, a: NodeId, b: NodeId) -> Result<&mut Self> {
        self.check(a.0)?;
        self.check(b.0)?;
        if a == b {
            return Err(Error::BidirectedSelfEdge(self.graph.labels[a.0].clone()));
        }
        self.insert_bidirected(a.0, b.0);
        Ok(self)
    }

    /// Removes `tail -> head`. Loops are refused.
    pub fn remove_directed(&mut self, tail: NodeId, head: NodeId) -> Result<bool> {
        self.check(tail.0)?;
        self.check(head.0)?;
        if tail == head {
            return Err(Error::LoopRemoval(self.graph.labels[tail.0].clone()));
        }
        let present = self.graph.children[tail.0].remove(head.0);
        self.graph.parents[head.0].remove(tail.0);
        Ok(present)
    }

    pub fn remove_bidirected(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        self.check(a.0)?;
        self.check(b.0)?;
        let present = self.graph.siblings[a.0].remove(b.0);
        self.graph.siblings[b.0].remove(a.0);
        Ok(present)
    }

    /// Drops every bidirected edge.
    pub fn clear_bidirected(&mut self) {
        for s in &mut self.graph.siblings {
            *s = NodeSet::new();
        }
    }

    pub(crate) fn insert_directed(&mut self, tail: usize, head: usize) {
        self.graph.children[tail].insert(head);
        self.graph.parents[head].insert(tail);
    }

    pub(crate) fn insert_bidirected(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.graph.siblings[a].insert(b);
        self.graph.siblings[b].insert(a);
    }

    pub fn parents(&self, v: usize) -> &NodeSet {
        self.graph.parents(v)
    }

    pub fn has_directed(&self, tail: usize, head: usize) -> bool {
        self.graph.has_directed(tail, head)
    }

    /// Read-only view of the graph under construction.
    pub fn view(&self) -> &Dmg {
        &self.graph
    }

    pub fn build(self) -> Dmg {
        self.graph
    }
}
