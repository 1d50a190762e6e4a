use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::Morphism;
use crate::graph::{Edge, EdgeId, Graph, Label, NodeId};

/// Every morphism `g -> h` (only the injective ones when `injective_only`).
///
/// Output order is lexicographic: node images first, in ascending source-id
/// order with ascending candidate ids, then edge images likewise.
pub fn enumerate_morphisms(g: &Arc<Graph>, h: &Arc<Graph>, injective_only: bool) -> Vec<Morphism> {
    let mut out = Vec::new();
    let mut search = Search::new(g, h, injective_only);
    let mut assigned = Vec::with_capacity(search.nodes.len());
    search.nodes_from(&mut assigned, &mut |nodes, edges| {
        out.push(Morphism::new(g.clone(), h.clone(), nodes, edges));
    });
    out
}

struct Search<'a> {
    g: &'a Graph,
    injective: bool,
    nodes: Vec<NodeId>,
    node_candidates: Vec<Vec<NodeId>>,
    edges: Vec<(EdgeId, &'a Edge)>,
    /// Target edges by (src, tgt, label), ascending id.
    buckets: HashMap<(NodeId, NodeId, &'a Label), Vec<EdgeId>>,
    used_nodes: BTreeSet<NodeId>,
    used_edges: BTreeSet<EdgeId>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &'a Graph, injective: bool) -> Self {
        let nodes: Vec<NodeId> = g.node_ids().collect();
        let node_candidates = g
            .nodes()
            .map(|(_, l)| {
                h.nodes()
                    .filter(|(_, l2)| *l2 == l)
                    .map(|(m, _)| m)
                    .collect()
            })
            .collect();
        let mut buckets: HashMap<_, Vec<EdgeId>> = HashMap::new();
        for (id, e) in h.edges() {
            buckets
                .entry((e.src, e.tgt, &e.label))
                .or_default()
                .push(id);
        }
        Search {
            g,
            injective,
            nodes,
            node_candidates,
            edges: g.edges().collect(),
            buckets,
            used_nodes: BTreeSet::new(),
            used_edges: BTreeSet::new(),
        }
    }

    fn image_of(&self, assigned: &[NodeId], n: NodeId) -> Option<NodeId> {
        self.nodes[..assigned.len()]
            .binary_search(&n)
            .ok()
            .map(|i| assigned[i])
    }

    /// Every edge of `g` between two assigned nodes, one of them `u`, has at
    /// least one candidate image.
    fn edges_feasible(&self, assigned: &[NodeId], u: NodeId) -> bool {
        self.g.incident_edges(u).all(|e| {
            let edge = self.g.edge(e).expect("incident edge exists");
            match (
                self.image_of(assigned, edge.src),
                self.image_of(assigned, edge.tgt),
            ) {
                (Some(s), Some(t)) => self.buckets.contains_key(&(s, t, &edge.label)),
                _ => true,
            }
        })
    }

    fn nodes_from(
        &mut self,
        assigned: &mut Vec<NodeId>,
        emit: &mut dyn FnMut(BTreeMap<NodeId, NodeId>, BTreeMap<EdgeId, EdgeId>),
    ) {
        let depth = assigned.len();
        if depth == self.nodes.len() {
            let node_map: BTreeMap<NodeId, NodeId> = self
                .nodes
                .iter()
                .copied()
                .zip(assigned.iter().copied())
                .collect();
            let mut edge_images = Vec::with_capacity(self.edges.len());
            self.edges_from(&node_map, &mut edge_images, emit);
            return;
        }
        let u = self.nodes[depth];
        for i in 0..self.node_candidates[depth].len() {
            let cand = self.node_candidates[depth][i];
            if self.injective && self.used_nodes.contains(&cand) {
                continue;
            }
            assigned.push(cand);
            if self.edges_feasible(assigned, u) {
                self.used_nodes.insert(cand);
                self.nodes_from(assigned, emit);
                self.used_nodes.remove(&cand);
            }
            assigned.pop();
        }
    }

    fn edges_from(
        &mut self,
        node_map: &BTreeMap<NodeId, NodeId>,
        images: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(BTreeMap<NodeId, NodeId>, BTreeMap<EdgeId, EdgeId>),
    ) {
        let depth = images.len();
        if depth == self.edges.len() {
            let edge_map = self
                .edges
                .iter()
                .map(|(id, _)| *id)
                .zip(images.iter().copied())
                .collect();
            emit(node_map.clone(), edge_map);
            return;
        }
        let (_, edge) = self.edges[depth];
        let key = (node_map[&edge.src], node_map[&edge.tgt], &edge.label);
        let Some(cands) = self.buckets.get(&key).cloned() else {
            return;
        };
        for cand in cands {
            if self.injective && self.used_edges.contains(&cand) {
                continue;
            }
            images.push(cand);
            self.used_edges.insert(cand);
            self.edges_from(node_map, images, emit);
            self.used_edges.remove(&cand);
            images.pop();
        }
    }
}
