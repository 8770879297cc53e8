//! JSON and DOT encodings of graphs.
//!
//! JSON: `{"nodes": [labels...], "directed": [[tail, head], ...], "bidirected": [[a, b], ...]}`.
//! Loops may appear on input and are ignored; they are never written.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Dmg, DmgBuilder};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub directed: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
}

impl GraphJson {
    pub fn from_graph(g: &Dmg) -> Self {
        let l = g.labels();
        GraphJson {
            nodes: l.to_vec(),
            directed: g.directed_edges().map(|(t, h)| (l[t].clone(), l[h].clone())).collect(),
            bidirected: g
                .bidirected_edges()
                .map(|(a, b)| (l[a].clone(), l[b].clone()))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Dmg> {
        let mut b = DmgBuilder::from_labels(self.nodes.iter().cloned())?;
        for (t, h) in &self.directed {
            let (t, h) = (b.node_by_label(t)?, b.node_by_label(h)?);
            b.add_directed(t, h)?;
        }
        for (x, y) in &self.bidirected {
            let (x, y) = (b.node_by_label(x)?, b.node_by_label(y)?);
            b.add_bidirected(x, y)?;
        }
        Ok(b.build())
    }
}

impl Dmg {
    pub fn from_json_str(s: &str) -> Result<Dmg> {
        serde_json::from_str::<GraphJson>(s)?.to_graph()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from_graph(self)).expect("plain data serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from_graph(self)).expect("plain data serializes")
    }

    /// Graphviz rendering; loops are suppressed.
    pub fn to_dot(&self) -> String {
        let l = self.labels();
        let mut out = String::from("digraph G {\n");
        for v in l {
            let _ = writeln!(out, "  {};", quote(v));
        }
        for (t, h) in self.directed_edges() {
            let _ = writeln!(out, "  {} -> {};", quote(&l[t]), quote(&l[h]));
        }
        for (a, b) in self.bidirected_edges() {
            let _ = writeln!(out, "  {} -> {} [dir=both];", quote(&l[a]), quote(&l[b]));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
