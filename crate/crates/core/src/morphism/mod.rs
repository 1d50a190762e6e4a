//! Graph morphisms: validity, composition, and the special-morphism predicates.
//!
//! Maps are stored extensionally, defined on exactly the items of the source
//! graph. Two morphisms with the same endpoints are equal iff their maps agree,
//! which makes equality of morphisms decidable without further restriction.

mod enumerate;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::validation::{Clause, ItemRef, ValidationReport};

pub use enumerate::enumerate_morphisms;

/// A pair of maps `(f_V, f_E)` from `source` to `target`.
#[derive(Debug, Clone)]
pub struct Morphism {
    source: Arc<Graph>,
    target: Arc<Graph>,
    nodes: BTreeMap<NodeId, NodeId>,
    edges: BTreeMap<EdgeId, EdgeId>,
}

/// Structural equality of graphs, short-circuiting on shared allocations.
pub fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.source, &other.source)
            && same_graph(&self.target, &other.target)
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl Eq for Morphism {}

impl Morphism {
    /// Assembles a morphism without checking it; see [`Morphism::validate`].
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        nodes: BTreeMap<NodeId, NodeId>,
        edges: BTreeMap<EdgeId, EdgeId>,
    ) -> Self {
        Morphism {
            source,
            target,
            nodes,
            edges,
        }
    }

    pub fn identity(graph: &Arc<Graph>) -> Self {
        Self::inclusion(graph, graph)
    }

    /// The map sending every item of `sub` to the item with the same id in
    /// `sup`. Only valid when `sub` is a subgraph of `sup` by ids.
    pub fn inclusion(sub: &Arc<Graph>, sup: &Arc<Graph>) -> Self {
        Morphism {
            source: sub.clone(),
            target: sup.clone(),
            nodes: sub.node_ids().map(|n| (n, n)).collect(),
            edges: sub.edge_ids().map(|e| (e, e)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn node(&self, n: NodeId) -> Option<NodeId> {
        self.nodes.get(&n).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edges.get(&e).copied()
    }

    pub fn node_map(&self) -> &BTreeMap<NodeId, NodeId> {
        &self.nodes
    }

    pub fn edge_map(&self) -> &BTreeMap<EdgeId, EdgeId> {
        &self.edges
    }

    /// Same maps, different target graph. Used to co-restrict a morphism to a
    /// subgraph of its target that contains its image, or to widen it.
    pub fn with_target(&self, target: &Arc<Graph>) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: target.clone(),
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Restriction to a subgraph `sub` of the source, i.e. precomposition with
    /// the inclusion of `sub`.
    pub fn restrict_source(&self, sub: &Arc<Graph>) -> Morphism {
        Morphism {
            source: sub.clone(),
            target: self.target.clone(),
            nodes: sub
                .node_ids()
                .filter_map(|n| Some((n, self.node(n)?)))
                .collect(),
            edges: sub
                .edge_ids()
                .filter_map(|e| Some((e, self.edge(e)?)))
                .collect(),
        }
    }

    /// Checks totality, range and the four preservation clauses.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (g, h) = (&*self.source, &*self.target);

        for n in g.node_ids() {
            match self.nodes.get(&n) {
                None => report.push(Clause::NotTotal, Some(ItemRef::Node(n))),
                Some(img) => match h.node_label(*img) {
                    None => report.push(Clause::OutOfRange, Some(ItemRef::Node(n))),
                    Some(l) if Some(l) != g.node_label(n) => {
                        report.push(Clause::NodeLabelPreserved, Some(ItemRef::Node(n)))
                    }
                    Some(_) => {}
                },
            }
        }
        for n in self.nodes.keys().filter(|n| !g.has_node(**n)) {
            report.push(Clause::OutsideDomain, Some(ItemRef::Node(*n)));
        }

        for (e, edge) in g.edges() {
            let Some(img) = self.edges.get(&e) else {
                report.push(Clause::NotTotal, Some(ItemRef::Edge(e)));
                continue;
            };
            let Some(image) = h.edge(*img) else {
                report.push(Clause::OutOfRange, Some(ItemRef::Edge(e)));
                continue;
            };
            if self.nodes.get(&edge.src) != Some(&image.src) {
                report.push(Clause::SourcePreserved, Some(ItemRef::Edge(e)));
            }
            if self.nodes.get(&edge.tgt) != Some(&image.tgt) {
                report.push(Clause::TargetPreserved, Some(ItemRef::Edge(e)));
            }
            if edge.label != image.label {
                report.push(Clause::EdgeLabelPreserved, Some(ItemRef::Edge(e)));
            }
        }
        for e in self.edges.keys().filter(|e| !g.has_edge(**e)) {
            report.push(Clause::OutsideDomain, Some(ItemRef::Edge(*e)));
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn is_injective(&self) -> bool {
        injective(self.nodes.values()) && injective(self.edges.values())
    }

    pub fn is_surjective(&self) -> bool {
        let hit_nodes: BTreeSet<_> = self.nodes.values().collect();
        let hit_edges: BTreeSet<_> = self.edges.values().collect();
        self.target.node_ids().all(|n| hit_nodes.contains(&n))
            && self.target.edge_ids().all(|e| hit_edges.contains(&e))
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// True when every item is sent to the item with the same id.
    pub fn is_inclusion(&self) -> bool {
        self.nodes.iter().all(|(a, b)| a == b) && self.edges.iter().all(|(a, b)| a == b)
    }

    /// The inverse of a bijective morphism.
    pub fn invert(&self) -> Result<Morphism> {
        if !self.is_bijective() {
            return Err(Error::Precondition(
                "only bijective morphisms can be inverted".into(),
            ));
        }
        Ok(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            nodes: self.nodes.iter().map(|(a, b)| (*b, *a)).collect(),
            edges: self.edges.iter().map(|(a, b)| (*b, *a)).collect(),
        })
    }

    /// Equality of the two maps on every item of the shared source graph.
    pub fn agrees_with(&self, other: &Morphism) -> Result<bool> {
        morphisms_agree(self, other)
    }

    /// Images of a set of source nodes.
    pub fn node_image(&self) -> BTreeSet<NodeId> {
        self.nodes.values().copied().collect()
    }

    pub fn edge_image(&self) -> BTreeSet<EdgeId> {
        self.edges.values().copied().collect()
    }
}

fn injective<'a, T: Ord + 'a>(values: impl Iterator<Item = &'a T>) -> bool {
    let mut seen = BTreeSet::new();
    values.into_iter().all(|v| seen.insert(v))
}

/// `after ∘ before`: first `before`, then `after`.
///
/// Fails when `before.target` and `after.source` are different graphs.
pub fn compose(after: &Morphism, before: &Morphism) -> Result<Morphism> {
    if !same_graph(&before.target, &after.source) {
        return Err(Error::Composition(
            "target of the first morphism differs from source of the second".into(),
        ));
    }
    let nodes = before
        .nodes
        .iter()
        .map(|(a, b)| {
            after
                .node(*b)
                .map(|c| (*a, c))
                .ok_or_else(|| Error::Composition(format!("node {} has no image", b.0)))
        })
        .collect::<Result<_>>()?;
    let edges = before
        .edges
        .iter()
        .map(|(a, b)| {
            after
                .edge(*b)
                .map(|c| (*a, c))
                .ok_or_else(|| Error::Composition(format!("edge {} has no image", b.0)))
        })
        .collect::<Result<_>>()?;
    Ok(Morphism {
        source: before.source.clone(),
        target: after.target.clone(),
        nodes,
        edges,
    })
}

/// Pointwise equality of two morphisms with the same endpoints.
pub fn morphisms_agree(m1: &Morphism, m2: &Morphism) -> Result<bool> {
    if !same_graph(&m1.source, &m2.source) || !same_graph(&m1.target, &m2.target) {
        return Err(Error::Precondition(
            "morphisms compared over different endpoints".into(),
        ));
    }
    let g = &m1.source;
    Ok(g.node_ids().all(|n| m1.node(n) == m2.node(n))
        && g.edge_ids().all(|e| m1.edge(e) == m2.edge(e)))
}
