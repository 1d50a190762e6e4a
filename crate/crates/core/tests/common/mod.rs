//! Brute-force oracles and fixtures shared by the integration tests and the
//! acceptance run. Every oracle here avoids the search strategy of the code
//! it checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;

use dpo_core::generate::Generator;
use dpo_core::{
    compose, enumerate_morphisms, is_pushout_injective, morphisms_agree, EdgeId, Graph, Morphism,
    NodeId, ParallelPair, Rule, Square,
};

/// Isomorphism by trying every node bijection; edges then match iff every
/// (source, target, label) class has the same size on both sides.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let gn: Vec<NodeId> = g.node_ids().collect();
    let hn: Vec<NodeId> = h.node_ids().collect();
    let classes = |graph: &Graph, rename: &dyn Fn(NodeId) -> NodeId| {
        let mut counts: BTreeMap<(NodeId, NodeId, String), usize> = BTreeMap::new();
        for (_, e) in graph.edges() {
            *counts
                .entry((rename(e.src), rename(e.tgt), e.label.as_str().to_string()))
                .or_default() += 1;
        }
        counts
    };
    let target = classes(h, &|n| n);
    hn.iter().copied().permutations(hn.len()).any(|perm| {
        let map: BTreeMap<NodeId, NodeId> = gn.iter().copied().zip(perm).collect();
        gn.iter().all(|n| g.node_label(*n) == h.node_label(map[n]))
            && classes(g, &|n| map[&n]) == target
    })
}

/// Every valid morphism `g -> h`, by enumerating all pairs of total maps.
pub fn brute_morphisms(g: &Arc<Graph>, h: &Arc<Graph>, injective_only: bool) -> Vec<Morphism> {
    let gn: Vec<NodeId> = g.node_ids().collect();
    let ge: Vec<EdgeId> = g.edge_ids().collect();
    let hn: Vec<NodeId> = h.node_ids().collect();
    let he: Vec<EdgeId> = h.edge_ids().collect();
    let node_maps: Vec<Vec<NodeId>> = if gn.is_empty() {
        vec![vec![]]
    } else {
        (0..gn.len())
            .map(|_| hn.clone())
            .multi_cartesian_product()
            .collect()
    };
    let edge_maps: Vec<Vec<EdgeId>> = if ge.is_empty() {
        vec![vec![]]
    } else {
        (0..ge.len())
            .map(|_| he.clone())
            .multi_cartesian_product()
            .collect()
    };
    let mut out = Vec::new();
    for nm in &node_maps {
        for em in &edge_maps {
            let m = Morphism::new(
                g.clone(),
                h.clone(),
                gn.iter().copied().zip(nm.iter().copied()).collect(),
                ge.iter().copied().zip(em.iter().copied()).collect(),
            );
            if m.is_valid() && (!injective_only || m.is_injective()) {
                out.push(m);
            }
        }
    }
    out
}

/// Witnesses `L1 -> D2`, `L2 -> D1` by exhaustive search with the triangle
/// filter, instead of the forced candidate.
pub fn exhaustive_independence(pair: &ParallelPair) -> bool {
    let triangle = |l: &Arc<Graph>, d: &dpo_core::DirectDerivation, m: &Morphism| {
        enumerate_morphisms(l, d.context(), false)
            .into_iter()
            .any(|j| {
                compose(&d.deletion.context_inclusion, &j)
                    .and_then(|c| morphisms_agree(&c, m))
                    .unwrap_or(false)
            })
    };
    triangle(
        &pair.first.rule.lhs,
        &pair.second,
        pair.first.matching.morphism(),
    ) && triangle(
        &pair.second.rule.lhs,
        &pair.first,
        pair.second.matching.morphism(),
    )
}

/// Every subgraph of `host` (by ids) that contains `must_nodes` and
/// `must_edges`.
pub fn subgraphs_containing(
    host: &Graph,
    must_nodes: &BTreeSet<NodeId>,
    must_edges: &BTreeSet<EdgeId>,
) -> Vec<Graph> {
    let free_nodes: Vec<NodeId> = host
        .node_ids()
        .filter(|n| !must_nodes.contains(n))
        .collect();
    let mut out = Vec::new();
    for extra in free_nodes.iter().copied().powerset() {
        let nodes: BTreeSet<NodeId> = must_nodes.iter().copied().chain(extra).collect();
        let free_edges: Vec<EdgeId> = host
            .edges()
            .filter(|(id, e)| {
                !must_edges.contains(id) && nodes.contains(&e.src) && nodes.contains(&e.tgt)
            })
            .map(|(id, _)| id)
            .collect();
        for more in free_edges.iter().copied().powerset() {
            let edges: BTreeSet<EdgeId> = must_edges.iter().copied().chain(more).collect();
            out.push(host.restrict(&nodes, &edges));
        }
    }
    out
}

/// Contexts `D' <= G` that complete `K -> L -> G` to a square passing the
/// pushout check, with `K -> D'` forced to be the match restricted to `K`.
pub fn passing_complements(rule_left: &Morphism, matching: &Morphism) -> Vec<Arc<Graph>> {
    let host = matching.target();
    let kg = compose(matching, rule_left).expect("composable");
    let must_nodes = kg.node_image();
    let must_edges = kg.edge_image();
    // Subgraphs must be valid graphs, so endpoints of required edges count too.
    let mut must_nodes = must_nodes;
    for e in &must_edges {
        let edge = host.edge(*e).expect("edge exists");
        must_nodes.insert(edge.src);
        must_nodes.insert(edge.tgt);
    }
    subgraphs_containing(host, &must_nodes, &must_edges)
        .into_iter()
        .map(Arc::new)
        .filter(|d| {
            let sq = Square::new(
                rule_left.clone(),
                kg.with_target(d),
                matching.clone(),
                Morphism::inclusion(d, host),
            );
            is_pushout_injective(&sq)
                .map(|r| r.verdict)
                .unwrap_or(false)
        })
        .collect()
}

/// Every edge over `nodes`, in both labels and `copies` times over.
fn complete(nodes: &[(u64, &str)], copies: u64) -> Graph {
    let mut edges = Vec::new();
    let mut id = 0;
    for (s, _) in nodes {
        for (t, _) in nodes {
            for label in ["x", "y"] {
                for _ in 0..copies {
                    edges.push((id, *s, *t, label));
                    id += 1;
                }
            }
        }
    }
    Graph::build(nodes, &edges)
}

/// The test family of probe targets, all with at most three nodes: complete
/// graphs over both node labels, one with doubled parallel edges, and a few
/// seeded graphs.
pub fn probe_family() -> Vec<Arc<Graph>> {
    let mut family = vec![
        Arc::new(complete(&[(0, "a"), (1, "a"), (2, "b")], 1)),
        Arc::new(complete(&[(0, "a"), (1, "b"), (2, "b")], 1)),
        Arc::new(complete(&[(0, "a"), (1, "b")], 2)),
    ];
    for seed in 0..6 {
        family.push(Arc::new(Generator::new(1000 + seed).graph(3, 5)));
    }
    family
}

/// For every cospan `p: B -> X`, `t: C -> X` agreeing on `A`, the number of
/// `u: D -> X` with `u . bd = p` and `u . cd = t`. Returns the counts of all
/// commuting cospans found.
pub fn mediator_counts(sq: &Square, x: &Arc<Graph>) -> Vec<usize> {
    let key = |m: &Morphism| (m.node_map().clone(), m.edge_map().clone());
    // How many u produce each pair of restrictions.
    let mut by_restriction: BTreeMap<_, usize> = BTreeMap::new();
    for u in enumerate_morphisms(sq.bd.target(), x, false) {
        let p = compose(&u, &sq.bd).expect("composable");
        let t = compose(&u, &sq.cd).expect("composable");
        *by_restriction.entry((key(&p), key(&t))).or_default() += 1;
    }
    // Cospans grouped by their common restriction to A.
    let mut ps: BTreeMap<_, Vec<Morphism>> = BTreeMap::new();
    for p in enumerate_morphisms(sq.bd.source(), x, false) {
        ps.entry(key(&compose(&p, &sq.ab).expect("composable")))
            .or_default()
            .push(p);
    }
    let mut counts = Vec::new();
    for t in enumerate_morphisms(sq.cd.source(), x, false) {
        let restricted = key(&compose(&t, &sq.ac).expect("composable"));
        for p in ps.get(&restricted).into_iter().flatten() {
            counts.push(by_restriction.get(&(key(p), key(&t))).copied().unwrap_or(0));
        }
    }
    counts
}

/// A fixed corpus of small graphs: every graph on up to two nodes over a
/// small alphabet, then seeded graphs up to five nodes.
pub fn graph_corpus(size: usize) -> Vec<Graph> {
    let mut corpus = vec![
        Graph::new(),
        Graph::build(&[(0, "a")], &[]),
        Graph::build(&[(0, "b")], &[]),
        Graph::build(&[(0, "a")], &[(0, 0, 0, "x")]),
        Graph::build(&[(0, "a"), (1, "a")], &[(0, 0, 1, "x")]),
        Graph::build(&[(0, "a"), (1, "a")], &[(0, 1, 0, "x")]),
        Graph::build(&[(0, "a"), (1, "a")], &[(0, 0, 1, "x"), (1, 1, 0, "x")]),
        Graph::build(&[(0, "a"), (1, "a")], &[(0, 0, 1, "x"), (1, 0, 1, "x")]),
    ];
    let mut gen = Generator::new(2024);
    while corpus.len() < size {
        let g = gen.graph(5, 6);
        // Renumbered copies make sure positive cases are common.
        let shifted = g.shifted(7, 3);
        corpus.push(g);
        if corpus.len() < size {
            corpus.push(shifted);
        }
    }
    corpus
}

pub fn identity_rule_of(g: &Graph) -> Rule {
    Rule::identity(&Arc::new(g.clone()))
}
pub mod props;
