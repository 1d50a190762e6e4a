use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EdgeId, Graph, Label, NodeId};
use crate::morphism::Morphism;

/// A structure- and label-preserving bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub node_map: BTreeMap<NodeId, NodeId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

impl IsoWitness {
    pub fn to_morphism(&self, source: &Arc<Graph>, target: &Arc<Graph>) -> Morphism {
        Morphism::new(
            source.clone(),
            target.clone(),
            self.node_map.clone(),
            self.edge_map.clone(),
        )
    }
}

type Signature<'a> = (&'a Label, usize, usize);

/// Edges between an ordered node pair, sorted by (label, id).
type PairIndex<'a> = HashMap<(NodeId, NodeId), Vec<(&'a Label, EdgeId)>>;

struct Side<'a> {
    graph: &'a Graph,
    signature: BTreeMap<NodeId, Signature<'a>>,
    pairs: PairIndex<'a>,
}

impl<'a> Side<'a> {
    fn new(graph: &'a Graph) -> Self {
        let mut indeg: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut outdeg: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut pairs: PairIndex<'a> = HashMap::new();
        for (id, e) in graph.edges() {
            *outdeg.entry(e.src).or_default() += 1;
            *indeg.entry(e.tgt).or_default() += 1;
            pairs
                .entry((e.src, e.tgt))
                .or_default()
                .push((&e.label, id));
        }
        for list in pairs.values_mut() {
            list.sort();
        }
        let signature = graph
            .nodes()
            .map(|(n, l)| {
                (
                    n,
                    (
                        l,
                        indeg.get(&n).copied().unwrap_or(0),
                        outdeg.get(&n).copied().unwrap_or(0),
                    ),
                )
            })
            .collect();
        Side {
            graph,
            signature,
            pairs,
        }
    }

    fn labels_between(&self, u: NodeId, w: NodeId) -> impl Iterator<Item = &'a Label> + '_ {
        self.pairs
            .get(&(u, w))
            .into_iter()
            .flat_map(|v| v.iter().map(|(l, _)| *l))
    }

    fn same_labels(&self, u: NodeId, w: NodeId, other: &Side<'_>, u2: NodeId, w2: NodeId) -> bool {
        self.labels_between(u, w).eq(other.labels_between(u2, w2))
    }
}

/// Searches for an isomorphism `g -> h`.
///
/// Backtracking over nodes in ascending id order; candidates are tried in
/// ascending id order and pruned by (label, in-degree, out-degree). Edge
/// multisets between already-mapped node pairs are compared as soon as both
/// endpoints are fixed, so a complete node assignment always extends to an
/// edge bijection.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<IsoWitness> {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let gs = Side::new(g);
    let hs = Side::new(h);

    let mut gsig: Vec<_> = gs.signature.values().collect();
    let mut hsig: Vec<_> = hs.signature.values().collect();
    gsig.sort();
    hsig.sort();
    if gsig != hsig {
        return None;
    }

    let order: Vec<NodeId> = g.node_ids().collect();
    let mut candidates: Vec<Vec<NodeId>> = Vec::with_capacity(order.len());
    for n in &order {
        let sig = gs.signature[n];
        candidates.push(
            hs.signature
                .iter()
                .filter(|(_, s)| **s == sig)
                .map(|(m, _)| *m)
                .collect(),
        );
    }

    let mut assignment: Vec<NodeId> = Vec::with_capacity(order.len());
    let mut used = BTreeSet::new();
    if !extend(&gs, &hs, &order, &candidates, &mut assignment, &mut used) {
        return None;
    }

    let node_map: BTreeMap<NodeId, NodeId> = order
        .iter()
        .copied()
        .zip(assignment.iter().copied())
        .collect();
    let mut edge_map = BTreeMap::new();
    for ((u, w), list) in &gs.pairs {
        let image = &hs.pairs[&(node_map[u], node_map[w])];
        for ((_, e), (_, e2)) in list.iter().zip(image.iter()) {
            edge_map.insert(*e, *e2);
        }
    }
    debug_assert_eq!(edge_map.len(), gs.graph.edge_count());
    Some(IsoWitness { node_map, edge_map })
}

fn extend(
    gs: &Side<'_>,
    hs: &Side<'_>,
    order: &[NodeId],
    candidates: &[Vec<NodeId>],
    assignment: &mut Vec<NodeId>,
    used: &mut BTreeSet<NodeId>,
) -> bool {
    let depth = assignment.len();
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for &cand in &candidates[depth] {
        if used.contains(&cand) {
            continue;
        }
        let consistent = gs.same_labels(u, u, hs, cand, cand)
            && order[..depth]
                .iter()
                .zip(assignment.iter())
                .all(|(&w, &w2)| {
                    gs.same_labels(u, w, hs, cand, w2) && gs.same_labels(w, u, hs, w2, cand)
                });
        if !consistent {
            continue;
        }
        assignment.push(cand);
        used.insert(cand);
        if extend(gs, hs, order, candidates, assignment, used) {
            return true;
        }
        used.remove(&cand);
        assignment.pop();
    }
    false
}
