//! Set-theoretic constructions: gluing (pushout object), deletion (pushout
//! complement) and the canonical pullback object.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::diagram::{CheckReport, Square};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::morphism::{compose, same_graph, Morphism};
use crate::validation::ItemRef;

/// Where freshly created items start numbering.
///
/// New ids are `max(existing) + 1 + offset`, counting upwards in ascending
/// order of the items they stand for. The offset only changes identifiers,
/// never the shape of the result.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FreshIds {
    pub offset: u64,
}

impl FreshIds {
    pub fn with_offset(offset: u64) -> Self {
        FreshIds { offset }
    }

    fn first_node(self, g: &Graph) -> u64 {
        g.max_node_id().map_or(0, |n| n.0 + 1) + self.offset
    }

    fn first_edge(self, g: &Graph) -> u64 {
        g.max_edge_id().map_or(0, |e| e.0 + 1) + self.offset
    }
}

/// The gluing of a context `D` and a right-hand side `R` along `K`.
#[derive(Debug, Clone)]
pub struct GluingResult {
    /// `K -> R`
    pub interface_to_right: Morphism,
    /// `K -> D`
    pub interface_to_context: Morphism,
    /// `H`
    pub glued: Arc<Graph>,
    /// `R -> H`, injective.
    pub right_embedding: Morphism,
    /// `D -> H`, an identity-map inclusion.
    pub context_inclusion: Morphism,
}

impl GluingResult {
    /// `K -> R`, `K -> D`, `R -> H`, `D -> H`.
    pub fn square(&self) -> Square {
        Square::new(
            self.interface_to_right.clone(),
            self.interface_to_context.clone(),
            self.right_embedding.clone(),
            self.context_inclusion.clone(),
        )
    }
}

fn require_injective(m: &Morphism, what: &str) -> Result<()> {
    let report = m.validate();
    if !report.is_ok() {
        return Err(Error::Precondition(format!(
            "{what} is not a valid morphism: {report}"
        )));
    }
    if !m.is_injective() {
        return Err(Error::Precondition(format!("{what} is not injective")));
    }
    Ok(())
}

/// Glues `D` and `R` along the injective span `R <-b- K -d-> D`.
///
/// `H` keeps every item of `D` under its own id and adds the items of
/// `R - b(K)` under fresh ids. An edge of `R - b(K)` whose source lies in
/// `b(K)` is attached at `d(b^-1(source))`, otherwise at the fresh copy of its
/// source; targets likewise.
pub fn gluing(b: &Morphism, d: &Morphism) -> Result<GluingResult> {
    gluing_with(b, d, FreshIds::default())
}

pub fn gluing_with(b: &Morphism, d: &Morphism, fresh: FreshIds) -> Result<GluingResult> {
    require_injective(b, "K -> R")?;
    require_injective(d, "K -> D")?;
    if !same_graph(b.source(), d.source()) {
        return Err(Error::Precondition(
            "the two legs of the span have different sources".into(),
        ));
    }
    let right = b.target();
    let context = d.target();

    // Inverse of b on its image; well defined because b is injective.
    let b_inv_nodes: BTreeMap<NodeId, NodeId> =
        b.node_map().iter().map(|(k, r)| (*r, *k)).collect();
    let b_inv_edges: BTreeMap<EdgeId, EdgeId> =
        b.edge_map().iter().map(|(k, r)| (*r, *k)).collect();

    let mut glued = (**context).clone();
    let mut node_img = BTreeMap::new();
    let mut next = fresh.first_node(context);
    for (r, label) in right.nodes() {
        let image = match b_inv_nodes.get(&r) {
            Some(k) => d.node(*k).expect("d is total"),
            None => {
                let id = NodeId(next);
                next += 1;
                glued.insert_node(id, label.clone());
                id
            }
        };
        node_img.insert(r, image);
    }

    let mut edge_img = BTreeMap::new();
    let mut next = fresh.first_edge(context);
    for (e, edge) in right.edges() {
        let image = match b_inv_edges.get(&e) {
            Some(k) => d.edge(*k).expect("d is total"),
            None => {
                let id = EdgeId(next);
                next += 1;
                glued.insert_edge(
                    id,
                    node_img[&edge.src],
                    node_img[&edge.tgt],
                    edge.label.clone(),
                );
                id
            }
        };
        edge_img.insert(e, image);
    }

    let glued = Arc::new(glued);
    Ok(GluingResult {
        interface_to_right: b.clone(),
        interface_to_context: d.clone(),
        right_embedding: Morphism::new(right.clone(), glued.clone(), node_img, edge_img),
        context_inclusion: Morphism::inclusion(context, &glued),
        glued,
    })
}

/// The context left after removing the matched, non-preserved items.
#[derive(Debug, Clone)]
pub struct DeletionResult {
    /// `K -> L`
    pub interface_to_left: Morphism,
    /// `L -> G`
    pub matching: Morphism,
    /// `D`, a subgraph of `G` by ids.
    pub context: Arc<Graph>,
    /// `K -> D`
    pub interface_to_context: Morphism,
    /// `D -> G`, an identity-map inclusion.
    pub context_inclusion: Morphism,
}

impl DeletionResult {
    /// `K -> L`, `K -> D`, `L -> G`, `D -> G`.
    pub fn square(&self) -> Square {
        Square::new(
            self.interface_to_left.clone(),
            self.interface_to_context.clone(),
            self.matching.clone(),
            self.context_inclusion.clone(),
        )
    }
}

/// Items of `G` that a match deletes: `m(L - b(K))`.
pub(crate) fn deleted_items(
    left: &Morphism,
    matching: &Morphism,
) -> (BTreeSet<NodeId>, BTreeSet<EdgeId>) {
    let kept_nodes = left.node_image();
    let kept_edges = left.edge_image();
    let lhs = left.target();
    let nodes = lhs
        .node_ids()
        .filter(|n| !kept_nodes.contains(n))
        .filter_map(|n| matching.node(n))
        .collect();
    let edges = lhs
        .edge_ids()
        .filter(|e| !kept_edges.contains(e))
        .filter_map(|e| matching.edge(e))
        .collect();
    (nodes, edges)
}

/// Edges of `G` that survive deletion but lose an endpoint, ascending.
pub(crate) fn dangling_edges(left: &Morphism, matching: &Morphism) -> Vec<EdgeId> {
    let (nodes, edges) = deleted_items(left, matching);
    matching
        .target()
        .edges()
        .filter(|(id, e)| !edges.contains(id) && (nodes.contains(&e.src) || nodes.contains(&e.tgt)))
        .map(|(id, _)| id)
        .collect()
}

pub(crate) fn dangling_report(left: &Morphism, matching: &Morphism) -> CheckReport {
    let dangling = dangling_edges(left, matching);
    if dangling.is_empty() {
        CheckReport::pass()
    } else {
        CheckReport::fail(
            "dangling edge: incident to a deleted node but not deleted",
            dangling.into_iter().map(ItemRef::Edge).collect(),
        )
    }
}

/// Removes `m(L - b(K))` from `G`.
///
/// Requires both morphisms injective and the dangling condition to hold; the
/// latter failing yields [`Error::Dangling`] with the offending edges.
pub fn deletion(left: &Morphism, matching: &Morphism) -> Result<DeletionResult> {
    require_injective(left, "K -> L")?;
    require_injective(matching, "L -> G")?;
    if !same_graph(left.target(), matching.source()) {
        return Err(Error::Precondition(
            "match does not start at the rule's left-hand side".into(),
        ));
    }
    let report = dangling_report(left, matching);
    if !report.verdict {
        return Err(Error::Dangling(report));
    }
    let host = matching.target();
    let (del_nodes, del_edges) = deleted_items(left, matching);
    let keep_nodes = host.node_ids().filter(|n| !del_nodes.contains(n)).collect();
    let keep_edges = host.edge_ids().filter(|e| !del_edges.contains(e)).collect();
    let context = Arc::new(host.restrict(&keep_nodes, &keep_edges));
    let interface_to_context = compose(matching, left)?.with_target(&context);
    Ok(DeletionResult {
        interface_to_left: left.clone(),
        matching: matching.clone(),
        context_inclusion: Morphism::inclusion(&context, host),
        interface_to_context,
        context,
    })
}

/// The canonical pullback of a cospan `B -f-> D <-g- C`.
#[derive(Debug, Clone)]
pub struct PullbackResult {
    /// `B -> D`
    pub left: Morphism,
    /// `C -> D`
    pub right: Morphism,
    /// `A`
    pub apex: Arc<Graph>,
    /// `A -> B`, first projection.
    pub to_left: Morphism,
    /// `A -> C`, second projection.
    pub to_right: Morphism,
    /// The pair each node of `A` stands for.
    pub node_pairs: BTreeMap<NodeId, (NodeId, NodeId)>,
    pub edge_pairs: BTreeMap<EdgeId, (EdgeId, EdgeId)>,
}

impl PullbackResult {
    /// `A -> B`, `A -> C`, `B -> D`, `C -> D`.
    pub fn square(&self) -> Square {
        Square::new(
            self.to_left.clone(),
            self.to_right.clone(),
            self.left.clone(),
            self.right.clone(),
        )
    }

    pub fn node_for(&self, pair: (NodeId, NodeId)) -> Option<NodeId> {
        self.node_pairs
            .iter()
            .find(|(_, p)| **p == pair)
            .map(|(id, _)| *id)
    }

    pub fn edge_for(&self, pair: (EdgeId, EdgeId)) -> Option<EdgeId> {
        self.edge_pairs
            .iter()
            .find(|(_, p)| **p == pair)
            .map(|(id, _)| *id)
    }

    /// The unique `u: X -> A` with `to_left ∘ u = p` and `to_right ∘ u = t`.
    ///
    /// Fails when `p` and `t` do not form a commuting cone over the cospan.
    pub fn mediator(&self, p: &Morphism, t: &Morphism) -> Result<Morphism> {
        if !same_graph(p.source(), t.source()) {
            return Err(Error::Precondition(
                "cone legs have different sources".into(),
            ));
        }
        let by_node: BTreeMap<_, _> = self.node_pairs.iter().map(|(a, pr)| (*pr, *a)).collect();
        let by_edge: BTreeMap<_, _> = self.edge_pairs.iter().map(|(a, pr)| (*pr, *a)).collect();
        let x = p.source();
        let mut nodes = BTreeMap::new();
        for n in x.node_ids() {
            let pair = (
                p.node(n)
                    .ok_or_else(|| Error::Precondition("p not total".into()))?,
                t.node(n)
                    .ok_or_else(|| Error::Precondition("t not total".into()))?,
            );
            let a = by_node.get(&pair).ok_or_else(|| {
                Error::Precondition(format!("cone does not commute at node {}", n.0))
            })?;
            nodes.insert(n, *a);
        }
        let mut edges = BTreeMap::new();
        for e in x.edge_ids() {
            let pair = (
                p.edge(e)
                    .ok_or_else(|| Error::Precondition("p not total".into()))?,
                t.edge(e)
                    .ok_or_else(|| Error::Precondition("t not total".into()))?,
            );
            let a = by_edge.get(&pair).ok_or_else(|| {
                Error::Precondition(format!("cone does not commute at edge {}", e.0))
            })?;
            edges.insert(e, *a);
        }
        Ok(Morphism::new(x.clone(), self.apex.clone(), nodes, edges))
    }
}

/// Builds `A = {(x, y) | f(x) = g(y)}` for nodes and edges, with
/// componentwise source and target and labels taken from `B`.
///
/// Ids of `A` are consecutive from 0 in lexicographic pair order.
pub fn pullback_construct(f: &Morphism, g: &Morphism) -> Result<PullbackResult> {
    if !same_graph(f.target(), g.target()) {
        return Err(Error::Precondition(
            "cospan legs have different targets".into(),
        ));
    }
    for (m, what) in [(f, "B -> D"), (g, "C -> D")] {
        let report = m.validate();
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "{what} is not a valid morphism: {report}"
            )));
        }
    }
    let (b, c) = (f.source(), g.source());
    let mut apex = Graph::new();
    let mut node_pairs = BTreeMap::new();
    let mut pair_node = BTreeMap::new();
    for (x, label) in b.nodes() {
        for y in c.node_ids() {
            if f.node(x) == g.node(y) {
                let id = NodeId(node_pairs.len() as u64);
                apex.insert_node(id, label.clone());
                node_pairs.insert(id, (x, y));
                pair_node.insert((x, y), id);
            }
        }
    }
    let mut edge_pairs = BTreeMap::new();
    for (x, ex) in b.edges() {
        for (y, ey) in c.edges() {
            if f.edge(x) == g.edge(y) {
                let id = EdgeId(edge_pairs.len() as u64);
                // Both endpoint pairs exist because f and g preserve structure.
                let src = pair_node[&(ex.src, ey.src)];
                let tgt = pair_node[&(ex.tgt, ey.tgt)];
                apex.insert_edge(id, src, tgt, ex.label.clone());
                edge_pairs.insert(id, (x, y));
            }
        }
    }
    let apex = Arc::new(apex);
    let to_left = Morphism::new(
        apex.clone(),
        b.clone(),
        node_pairs.iter().map(|(a, p)| (*a, p.0)).collect(),
        edge_pairs.iter().map(|(a, p)| (*a, p.0)).collect(),
    );
    let to_right = Morphism::new(
        apex.clone(),
        c.clone(),
        node_pairs.iter().map(|(a, p)| (*a, p.1)).collect(),
        edge_pairs.iter().map(|(a, p)| (*a, p.1)).collect(),
    );
    Ok(PullbackResult {
        left: f.clone(),
        right: g.clone(),
        apex,
        to_left,
        to_right,
        node_pairs,
        edge_pairs,
    })
}
