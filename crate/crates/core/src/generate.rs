//! Seeded random generators for graphs, morphisms, rules and derivations.
//!
//! Everything is reproducible from the seed. Generated graphs use scrambled,
//! non-contiguous ids so that nothing downstream can rely on ids being dense
//! or on the generator's numbering.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeId, Graph, Label, NodeId};
use crate::independence::{parallel_independent, ParallelPair};
use crate::morphism::Morphism;
use crate::rewriting::{apply, find_matches, DirectDerivation, Match, Rule};

/// Size limits and label alphabets.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub node_labels: Vec<Label>,
    pub edge_labels: Vec<Label>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            node_labels: vec!["a".into(), "b".into()],
            edge_labels: vec!["x".into(), "y".into()],
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    config: GenConfig,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self::with_config(seed, GenConfig::default())
    }

    pub fn with_config(seed: u64, config: GenConfig) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn node_label(&mut self) -> Label {
        self.config
            .node_labels
            .choose(&mut self.rng)
            .expect("non-empty alphabet")
            .clone()
    }

    fn edge_label(&mut self) -> Label {
        self.config
            .edge_labels
            .choose(&mut self.rng)
            .expect("non-empty alphabet")
            .clone()
    }

    /// `count` distinct ids drawn from `0..3*count+3`, in random order.
    fn scrambled_ids(&mut self, count: usize) -> Vec<u64> {
        let mut pool: Vec<u64> = (0..(3 * count as u64 + 3)).collect();
        pool.shuffle(&mut self.rng);
        pool.truncate(count);
        pool
    }

    /// A graph with at most `max_nodes` nodes and `max_edges` edges. Edges
    /// need at least one node, so node-free graphs are edge-free.
    pub fn graph(&mut self, max_nodes: usize, max_edges: usize) -> Graph {
        let empty = Arc::new(Graph::new());
        let (g, _) = self.extension(&empty, max_nodes, max_edges);
        Arc::unwrap_or_clone(g)
    }

    /// A supergraph of `base` with up to `extra_nodes` new nodes and
    /// `extra_edges` new edges, every item renumbered at random. Returns the
    /// embedding `base -> extension`, which is injective.
    pub fn extension(
        &mut self,
        base: &Arc<Graph>,
        extra_nodes: usize,
        extra_edges: usize,
    ) -> (Arc<Graph>, Morphism) {
        let new_nodes = self.rng.gen_range(0..=extra_nodes);
        let node_ids = self.scrambled_ids(base.node_count() + new_nodes);
        let mut node_map = BTreeMap::new();
        let mut g = Graph::new();
        for (n, label) in base.nodes() {
            let id = NodeId(node_ids[node_map.len()]);
            node_map.insert(n, id);
            g.insert_node(id, label.clone());
        }
        for id in &node_ids[base.node_count()..] {
            let label = self.node_label();
            g.insert_node(NodeId(*id), label);
        }

        let all_nodes: Vec<NodeId> = g.node_ids().collect();
        let new_edges = if all_nodes.is_empty() {
            0
        } else {
            self.rng.gen_range(0..=extra_edges)
        };
        let edge_ids = self.scrambled_ids(base.edge_count() + new_edges);
        let mut edge_map = BTreeMap::new();
        for (e, edge) in base.edges() {
            let id = EdgeId(edge_ids[edge_map.len()]);
            edge_map.insert(e, id);
            g.insert_edge(
                id,
                node_map[&edge.src],
                node_map[&edge.tgt],
                edge.label.clone(),
            );
        }
        for id in &edge_ids[base.edge_count()..] {
            let src = *all_nodes.choose(&mut self.rng).expect("nodes exist");
            let tgt = *all_nodes.choose(&mut self.rng).expect("nodes exist");
            let label = self.edge_label();
            g.insert_edge(EdgeId(*id), src, tgt, label);
        }
        let g = Arc::new(g);
        let m = Morphism::new(base.clone(), g.clone(), node_map, edge_map);
        (g, m)
    }

    /// A valid, possibly non-injective morphism into `target` from a fresh
    /// source graph with up to `max_nodes` nodes and `max_edges` edges.
    pub fn morphism_into(
        &mut self,
        target: &Arc<Graph>,
        max_nodes: usize,
        max_edges: usize,
    ) -> Morphism {
        let targets: Vec<NodeId> = target.node_ids().collect();
        let mut source = Graph::new();
        let mut nodes = BTreeMap::new();
        if !targets.is_empty() {
            let count = self.rng.gen_range(0..=max_nodes);
            for id in self.scrambled_ids(count) {
                let image = *targets.choose(&mut self.rng).expect("non-empty");
                source.insert_node(
                    NodeId(id),
                    target.node_label(image).expect("node exists").clone(),
                );
                nodes.insert(NodeId(id), image);
            }
        }
        let mut edges = BTreeMap::new();
        let sources: Vec<NodeId> = source.node_ids().collect();
        if !sources.is_empty() {
            let attempts = self.rng.gen_range(0..=max_edges);
            let ids = self.scrambled_ids(attempts);
            for id in ids {
                let s = *sources.choose(&mut self.rng).expect("non-empty");
                let t = *sources.choose(&mut self.rng).expect("non-empty");
                let candidates: Vec<EdgeId> = target
                    .edges()
                    .filter(|(_, e)| e.src == nodes[&s] && e.tgt == nodes[&t])
                    .map(|(id, _)| id)
                    .collect();
                if let Some(image) = candidates.choose(&mut self.rng) {
                    let label = target.edge(*image).expect("edge exists").label.clone();
                    source.insert_edge(EdgeId(id), s, t, label);
                    edges.insert(EdgeId(id), *image);
                }
            }
        }
        Morphism::new(Arc::new(source), target.clone(), nodes, edges)
    }

    /// A random subgraph of `target`, renumbered, with its injective
    /// embedding into `target`.
    pub fn embedding_into(&mut self, target: &Arc<Graph>) -> Morphism {
        let nodes: std::collections::BTreeSet<NodeId> = target
            .node_ids()
            .filter(|_| self.rng.gen_bool(0.6))
            .collect();
        let edges = target
            .edges()
            .filter(|(_, e)| nodes.contains(&e.src) && nodes.contains(&e.tgt))
            .map(|(id, _)| id)
            .filter(|_| self.rng.gen_bool(0.6))
            .collect();
        let sub = target.restrict(&nodes, &edges);
        let node_ids = self.scrambled_ids(sub.node_count());
        let edge_ids = self.scrambled_ids(sub.edge_count());
        let to_new_n: BTreeMap<NodeId, NodeId> = sub
            .node_ids()
            .zip(node_ids.into_iter().map(NodeId))
            .collect();
        let to_new_e: BTreeMap<EdgeId, EdgeId> = sub
            .edge_ids()
            .zip(edge_ids.into_iter().map(EdgeId))
            .collect();
        let source = Arc::new(
            sub.renumber(&to_new_n, &to_new_e)
                .expect("injective renumbering"),
        );
        Morphism::new(
            source,
            target.clone(),
            to_new_n.into_iter().map(|(old, new)| (new, old)).collect(),
            to_new_e.into_iter().map(|(old, new)| (new, old)).collect(),
        )
    }

    /// An injective span `R <- K -> D` with `|K| <= max_interface` nodes.
    pub fn injective_span(
        &mut self,
        max_interface: usize,
        max_extra: usize,
    ) -> (Morphism, Morphism) {
        let k = Arc::new(self.graph(max_interface, max_interface));
        let (_, b) = self.extension(&k, max_extra, max_extra);
        let (_, d) = self.extension(&k, max_extra, max_extra);
        (b, d)
    }

    /// A rule whose sides extend a random interface.
    pub fn rule(&mut self, max_interface: usize, max_extra: usize) -> Rule {
        let (b, r) = self.injective_span(max_interface, max_extra);
        Rule::new(b, r).expect("extensions are injective")
    }

    /// A host graph extending `rule.lhs` together with the embedding as match.
    pub fn host_for(&mut self, rule: &Rule, extra_nodes: usize, extra_edges: usize) -> Match {
        let (_, m) = self.extension(&rule.lhs, extra_nodes, extra_edges);
        Match::new(m).expect("extensions are injective")
    }

    /// A successful direct derivation, retrying until the dangling condition
    /// holds. Returns `None` after `attempts` failures.
    pub fn derivation(
        &mut self,
        max_interface: usize,
        max_extra: usize,
        attempts: usize,
    ) -> Option<DirectDerivation> {
        for _ in 0..attempts {
            let rule = self.rule(max_interface, max_extra);
            let m = self.host_for(&rule, max_extra, max_extra);
            if let Ok(d) = apply(&rule, &m) {
                return Some(d);
            }
        }
        None
    }

    /// A parallel independent pair of derivations on a common host that
    /// contains both left-hand sides, possibly overlapping.
    pub fn independent_pair(
        &mut self,
        max_interface: usize,
        max_extra: usize,
        attempts: usize,
    ) -> Option<ParallelPair> {
        for _ in 0..attempts {
            let p1 = self.rule(max_interface, max_extra);
            let p2 = self.rule(max_interface, max_extra);
            let m1 = self.host_for(&p1, max_extra, max_extra);
            let host = m1.host().clone();
            let mut matches2 = find_matches(&p2, &host);
            matches2.shuffle(&mut self.rng);
            let Ok(d1) = apply(&p1, &m1) else { continue };
            for m2 in matches2 {
                let Ok(d2) = apply(&p2, &m2) else { continue };
                let pair = ParallelPair::new(d1.clone(), d2).expect("same host");
                if parallel_independent(&pair).is_some() {
                    return Some(pair);
                }
            }
        }
        None
    }
}
