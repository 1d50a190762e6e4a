//! Finite labelled directed multigraphs.
//!
//! Nodes and edges carry integer identifiers that are unique within one graph.
//! Parallel edges and loops are allowed; two edges are distinct exactly when
//! their ids differ.

mod iso;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::validation::{Clause, ItemRef, ValidationReport};

pub use iso::{is_isomorphic, IsoWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

/// An uninterpreted label; only equality is ever inspected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(value: impl Into<String>) -> Self {
        Label(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(value: &str) -> Self {
        Label(value.to_string())
    }
}

impl From<String> for Label {
    fn from(value: String) -> Self {
        Label(value)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub tgt: NodeId,
    pub label: Label,
}

/// A finite labelled directed graph `(V, E, s, t, l, m)`.
///
/// Source, target and labelling functions are total by construction: every
/// edge record stores its endpoints and label. Endpoints may still point
/// outside `V`; such graphs can be built (for instance from a malformed file)
/// and are caught by [`Graph::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Label>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(id, label)` nodes and `(id, src, tgt, label)` edges.
    /// Later duplicates overwrite earlier ones.
    pub fn build(nodes: &[(u64, &str)], edges: &[(u64, u64, u64, &str)]) -> Self {
        let mut g = Graph::new();
        for &(id, label) in nodes {
            g.insert_node(NodeId(id), label);
        }
        for &(id, src, tgt, label) in edges {
            g.insert_edge(EdgeId(id), NodeId(src), NodeId(tgt), label);
        }
        g
    }

    /// Inserts or replaces a node, returning the previous label if any.
    pub fn insert_node(&mut self, id: NodeId, label: impl Into<Label>) -> Option<Label> {
        self.nodes.insert(id, label.into())
    }

    /// Inserts or replaces an edge. Endpoints are not checked here.
    pub fn insert_edge(
        &mut self,
        id: EdgeId,
        src: NodeId,
        tgt: NodeId,
        label: impl Into<Label>,
    ) -> Option<Edge> {
        self.edges.insert(
            id,
            Edge {
                src,
                tgt,
                label: label.into(),
            },
        )
    }

    pub fn remove_node(&mut self, id: NodeId) -> Option<Label> {
        self.nodes.remove(&id)
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        self.edges.remove(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn node_label(&self, id: NodeId) -> Option<&Label> {
        self.nodes.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Label)> + '_ {
        self.nodes.iter().map(|(id, l)| (*id, l))
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn max_node_id(&self) -> Option<NodeId> {
        self.nodes.keys().next_back().copied()
    }

    pub fn max_edge_id(&self) -> Option<EdgeId> {
        self.edges.keys().next_back().copied()
    }

    /// Edges with `node` as source or target, ascending.
    pub fn incident_edges(&self, node: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .filter(move |(_, e)| e.src == node || e.tgt == node)
            .map(|(id, _)| *id)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (id, edge) in &self.edges {
            if !self.nodes.contains_key(&edge.src) {
                report.push(Clause::SrcOutOfV, Some(ItemRef::Edge(*id)));
            }
            if !self.nodes.contains_key(&edge.tgt) {
                report.push(Clause::TgtOutOfV, Some(ItemRef::Edge(*id)));
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The subgraph induced by keeping the given items. Edges whose endpoints
    /// are not kept are kept anyway, so the caller decides whether the result
    /// is valid.
    pub fn restrict(&self, nodes: &BTreeSet<NodeId>, edges: &BTreeSet<EdgeId>) -> Graph {
        Graph {
            nodes: self
                .nodes
                .iter()
                .filter(|(id, _)| nodes.contains(id))
                .map(|(id, l)| (*id, l.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|(id, _)| edges.contains(id))
                .map(|(id, e)| (*id, e.clone()))
                .collect(),
        }
    }

    /// Copies the graph under new identifiers.
    ///
    /// Both maps must be total on this graph's items and injective. The
    /// returned graph is isomorphic to `self`, witnessed by exactly these maps.
    pub fn renumber(
        &self,
        node_map: &BTreeMap<NodeId, NodeId>,
        edge_map: &BTreeMap<EdgeId, EdgeId>,
    ) -> Result<Graph> {
        let mut out = Graph::new();
        for (id, label) in &self.nodes {
            let new = node_map.get(id).ok_or_else(|| {
                Error::Precondition(format!("node map not total at node {}", id.0))
            })?;
            if out.nodes.insert(*new, label.clone()).is_some() {
                return Err(Error::Precondition(format!(
                    "node map not injective: node {} hit twice",
                    new.0
                )));
            }
        }
        for (id, edge) in &self.edges {
            let new = edge_map.get(id).ok_or_else(|| {
                Error::Precondition(format!("edge map not total at edge {}", id.0))
            })?;
            let endpoint = |n: NodeId| {
                node_map.get(&n).copied().ok_or_else(|| {
                    Error::Precondition(format!("edge {} has endpoint {} outside V", id.0, n.0))
                })
            };
            let renamed = Edge {
                src: endpoint(edge.src)?,
                tgt: endpoint(edge.tgt)?,
                label: edge.label.clone(),
            };
            if out.edges.insert(*new, renamed).is_some() {
                return Err(Error::Precondition(format!(
                    "edge map not injective: edge {} hit twice",
                    new.0
                )));
            }
        }
        Ok(out)
    }

    /// Renumbers every node and edge by adding fixed offsets.
    pub fn shifted(&self, node_offset: u64, edge_offset: u64) -> Graph {
        let node_map = self
            .node_ids()
            .map(|n| (n, NodeId(n.0 + node_offset)))
            .collect();
        let edge_map = self
            .edge_ids()
            .map(|e| (e, EdgeId(e.0 + edge_offset)))
            .collect();
        self.renumber(&node_map, &edge_map)
            .expect("shifting is a bijection")
    }

    /// Graphviz rendering for external viewers.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for (id, label) in &self.nodes {
            out.push_str(&format!(
                "  n{} [label=\"{}:{}\"];\n",
                id.0,
                id.0,
                escape(label.as_str())
            ));
        }
        for (id, e) in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}:{}\"];\n",
                e.src.0,
                e.tgt.0,
                id.0,
                escape(e.label.as_str())
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
