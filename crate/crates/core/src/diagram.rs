//! Decidable checks on commutative squares
//!
//! ```text
//!        ab
//!    A ------> B
//!    |         |
//! ac |         | bd
//!    v         v
//!    C ------> D
//!        cd
//! ```
//!
//! Pushouts are recognised through the characterization for injective
//! squares: commutativity, the reduced chain-condition and joint
//! surjectivity. Pullbacks are recognised by comparing against the canonical
//! pullback object.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions::pullback_construct;
use crate::error::{Error, Result};
use crate::morphism::{compose, morphisms_agree, same_graph, Morphism};
use crate::validation::ItemRef;

/// A candidate square of four morphisms `A->B`, `A->C`, `B->D`, `C->D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub ab: Morphism,
    pub ac: Morphism,
    pub bd: Morphism,
    pub cd: Morphism,
}

impl Square {
    pub fn new(ab: Morphism, ac: Morphism, bd: Morphism, cd: Morphism) -> Self {
        Square { ab, ac, bd, cd }
    }

    /// Mirror along the diagonal: `B` and `C` trade places.
    pub fn transpose(&self) -> Square {
        Square {
            ab: self.ac.clone(),
            ac: self.ab.clone(),
            bd: self.cd.clone(),
            cd: self.bd.clone(),
        }
    }

    pub fn check_endpoints(&self) -> Result<()> {
        let wiring = [
            (
                self.ab.source(),
                self.ac.source(),
                "A->B and A->C start at different graphs",
            ),
            (
                self.bd.target(),
                self.cd.target(),
                "B->D and C->D end at different graphs",
            ),
            (
                self.ab.target(),
                self.bd.source(),
                "A->B does not end where B->D starts",
            ),
            (
                self.ac.target(),
                self.cd.source(),
                "A->C does not end where C->D starts",
            ),
        ];
        for (x, y, msg) in wiring {
            if !same_graph(x, y) {
                return Err(Error::Precondition(msg.into()));
            }
        }
        Ok(())
    }

    fn check_valid(&self) -> Result<()> {
        for (m, name) in self.named() {
            let report = m.validate();
            if !report.is_ok() {
                return Err(Error::Precondition(format!(
                    "{name} is not a valid morphism: {report}"
                )));
            }
        }
        Ok(())
    }

    fn named(&self) -> [(&Morphism, &'static str); 4] {
        [
            (&self.ab, "A->B"),
            (&self.ac, "A->C"),
            (&self.bd, "B->D"),
            (&self.cd, "C->D"),
        ]
    }

    /// All four morphisms pairwise agree with `other`'s.
    pub fn agrees_with(&self, other: &Square) -> Result<bool> {
        Ok(morphisms_agree(&self.ab, &other.ab)?
            && morphisms_agree(&self.ac, &other.ac)?
            && morphisms_agree(&self.bd, &other.bd)?
            && morphisms_agree(&self.cd, &other.cd)?)
    }
}

/// Verdict of a diagram check. A failing report names the clause and the
/// first offending items found in ascending-id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_clause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<ItemRef>>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport {
            verdict: true,
            failed_clause: None,
            counterexample: None,
        }
    }

    pub fn fail(clause: impl Into<String>, items: Vec<ItemRef>) -> Self {
        CheckReport {
            verdict: false,
            failed_clause: Some(clause.into()),
            counterexample: Some(items),
        }
    }

    /// Runs `next` only when this report passed.
    pub fn and_then(self, next: impl FnOnce() -> CheckReport) -> CheckReport {
        if self.verdict {
            next()
        } else {
            self
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verdict {
            return f.write_str("holds");
        }
        write!(
            f,
            "fails: {}",
            self.failed_clause.as_deref().unwrap_or("unspecified")
        )?;
        if let Some(items) = &self.counterexample {
            let items: Vec<String> = items.iter().map(ToString::to_string).collect();
            write!(f, " [{}]", items.join(", "))?;
        }
        Ok(())
    }
}

/// `bd ∘ ab = cd ∘ ac`, checked on every node and edge of `A`.
pub fn commutes(sq: &Square) -> Result<CheckReport> {
    sq.check_endpoints()?;
    sq.check_valid()?;
    let top = compose(&sq.bd, &sq.ab)?;
    let bottom = compose(&sq.cd, &sq.ac)?;
    let a = sq.ab.source();
    if let Some(n) = a.node_ids().find(|n| top.node(*n) != bottom.node(*n)) {
        return Ok(CheckReport::fail("commutativity", vec![ItemRef::Node(n)]));
    }
    if let Some(e) = a.edge_ids().find(|e| top.edge(*e) != bottom.edge(*e)) {
        return Ok(CheckReport::fail("commutativity", vec![ItemRef::Edge(e)]));
    }
    Ok(CheckReport::pass())
}

/// Every pair `b' ∈ B`, `c' ∈ C` with `bd(b') = cd(c')` has a common preimage
/// in `A`. Counterexamples are reported as `[b', c']`.
pub fn reduced_chain_condition(sq: &Square) -> CheckReport {
    let (b, c) = (sq.bd.source(), sq.cd.source());
    let node_spans: BTreeSet<_> = sq
        .ab
        .source()
        .node_ids()
        .map(|a| (sq.ab.node(a), sq.ac.node(a)))
        .collect();
    for x in b.node_ids() {
        for y in c.node_ids() {
            if sq.bd.node(x) == sq.cd.node(y) && !node_spans.contains(&(Some(x), Some(y))) {
                return CheckReport::fail(
                    "reduced chain-condition (nodes)",
                    vec![ItemRef::Node(x), ItemRef::Node(y)],
                );
            }
        }
    }
    let edge_spans: BTreeSet<_> = sq
        .ab
        .source()
        .edge_ids()
        .map(|a| (sq.ab.edge(a), sq.ac.edge(a)))
        .collect();
    for x in b.edge_ids() {
        for y in c.edge_ids() {
            if sq.bd.edge(x) == sq.cd.edge(y) && !edge_spans.contains(&(Some(x), Some(y))) {
                return CheckReport::fail(
                    "reduced chain-condition (edges)",
                    vec![ItemRef::Edge(x), ItemRef::Edge(y)],
                );
            }
        }
    }
    CheckReport::pass()
}

/// Every item of the shared target has a preimage under `bd` or `cd`.
pub fn jointly_surjective(bd: &Morphism, cd: &Morphism) -> Result<CheckReport> {
    if !same_graph(bd.target(), cd.target()) {
        return Err(Error::Precondition(
            "morphisms have different targets".into(),
        ));
    }
    let d = bd.target();
    let nodes: BTreeSet<_> = bd.node_image().union(&cd.node_image()).copied().collect();
    if let Some(n) = d.node_ids().find(|n| !nodes.contains(n)) {
        return Ok(CheckReport::fail(
            "joint surjectivity",
            vec![ItemRef::Node(n)],
        ));
    }
    let edges: BTreeSet<_> = bd.edge_image().union(&cd.edge_image()).copied().collect();
    if let Some(e) = d.edge_ids().find(|e| !edges.contains(e)) {
        return Ok(CheckReport::fail(
            "joint surjectivity",
            vec![ItemRef::Edge(e)],
        ));
    }
    Ok(CheckReport::pass())
}

/// Decides whether an all-injective square is a pushout.
///
/// Squares with a non-injective morphism are outside the characterization
/// and yield [`Error::Scope`].
pub fn is_pushout_injective(sq: &Square) -> Result<CheckReport> {
    sq.check_endpoints()?;
    sq.check_valid()?;
    if let Some((_, name)) = sq.named().into_iter().find(|(m, _)| !m.is_injective()) {
        return Err(Error::Scope(format!("{name} is not injective")));
    }
    let report = commutes(sq)?;
    if !report.verdict {
        return Ok(report);
    }
    let report = reduced_chain_condition(sq);
    if !report.verdict {
        return Ok(report);
    }
    jointly_surjective(&sq.bd, &sq.cd)
}

/// Decides whether a commuting square is a pullback by building the canonical
/// pullback `P` of `B -> D <- C` and checking that `a ↦ (ab(a), ac(a))` is an
/// isomorphism `A -> P`.
pub fn is_pullback(sq: &Square) -> Result<CheckReport> {
    let report = commutes(sq)?;
    if !report.verdict {
        return Err(Error::Precondition(format!(
            "square does not commute: {report}"
        )));
    }
    let canonical = pullback_construct(&sq.bd, &sq.cd)?;
    let u = canonical.mediator(&sq.ab, &sq.ac)?;

    let mut seen = BTreeMap::new();
    for (a, p) in u.node_map() {
        if let Some(prev) = seen.insert(*p, *a) {
            return Ok(CheckReport::fail(
                "mediating map not injective (nodes)",
                vec![ItemRef::Node(prev), ItemRef::Node(*a)],
            ));
        }
    }
    let mut seen = BTreeMap::new();
    for (a, p) in u.edge_map() {
        if let Some(prev) = seen.insert(*p, *a) {
            return Ok(CheckReport::fail(
                "mediating map not injective (edges)",
                vec![ItemRef::Edge(prev), ItemRef::Edge(*a)],
            ));
        }
    }
    let hit = u.node_image();
    if let Some((_, (x, y))) = canonical.node_pairs.iter().find(|(p, _)| !hit.contains(p)) {
        return Ok(CheckReport::fail(
            "mediating map not surjective: missing node pair",
            vec![ItemRef::Node(*x), ItemRef::Node(*y)],
        ));
    }
    let hit = u.edge_image();
    if let Some((_, (x, y))) = canonical.edge_pairs.iter().find(|(p, _)| !hit.contains(p)) {
        return Ok(CheckReport::fail(
            "mediating map not surjective: missing edge pair",
            vec![ItemRef::Edge(*x), ItemRef::Edge(*y)],
        ));
    }
    Ok(CheckReport::pass())
}

/// Pastes two squares along a shared vertical morphism:
///
/// ```text
/// A --> B --> E
/// |     |     |
/// C --> D --> F
/// ```
///
/// `first` is the left square `(A, B, C, D)`, `second` the right square
/// `(B, E, D, F)` with `second.ac` equal to `first.bd`. The result is the outer
/// square `(A, E, C, F)`.
pub fn compose_squares_horizontal(first: &Square, second: &Square) -> Result<Square> {
    first.check_endpoints()?;
    second.check_endpoints()?;
    if !morphisms_agree(&second.ac, &first.bd).unwrap_or(false) {
        return Err(Error::Precondition(
            "the shared edge B -> D of the two squares differs".into(),
        ));
    }
    Ok(Square {
        ab: compose(&second.ab, &first.ab)?,
        ac: first.ac.clone(),
        bd: second.bd.clone(),
        cd: compose(&second.cd, &first.cd)?,
    })
}

/// The morphism `u: D -> X` induced by a cocone `p: B -> X`, `t: C -> X` over a
/// square that passes [`is_pushout_injective`].
///
/// Each item of `D` is sent along whichever of `bd`, `cd` reaches it; the two
/// choices are checked to agree.
pub fn pushout_mediator(sq: &Square, p: &Morphism, t: &Morphism) -> Result<Morphism> {
    if !same_graph(p.source(), sq.bd.source()) || !same_graph(t.source(), sq.cd.source()) {
        return Err(Error::Precondition(
            "cocone legs do not start at B and C".into(),
        ));
    }
    if !same_graph(p.target(), t.target()) {
        return Err(Error::Precondition(
            "cocone legs have different targets".into(),
        ));
    }
    let mut nodes = BTreeMap::new();
    for (leg, cone) in [(&sq.bd, p), (&sq.cd, t)] {
        for (x, y) in leg.node_map() {
            let image = cone
                .node(*x)
                .ok_or_else(|| Error::Precondition(format!("cocone not total at node {}", x.0)))?;
            if nodes.insert(*y, image).is_some_and(|prev| prev != image) {
                return Err(Error::Precondition(format!(
                    "cocone disagrees on node {}",
                    y.0
                )));
            }
        }
    }
    let mut edges = BTreeMap::new();
    for (leg, cone) in [(&sq.bd, p), (&sq.cd, t)] {
        for (x, y) in leg.edge_map() {
            let image = cone
                .edge(*x)
                .ok_or_else(|| Error::Precondition(format!("cocone not total at edge {}", x.0)))?;
            if edges.insert(*y, image).is_some_and(|prev| prev != image) {
                return Err(Error::Precondition(format!(
                    "cocone disagrees on edge {}",
                    y.0
                )));
            }
        }
    }
    let u = Morphism::new(sq.bd.target().clone(), p.target().clone(), nodes, edges);
    let report = u.validate();
    if !report.is_ok() {
        return Err(Error::Precondition(format!(
            "induced map is not a morphism: {report}"
        )));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::gluing;
    use crate::graph::{EdgeId, Graph, NodeId};

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    fn morph(
        src: &Arc<Graph>,
        tgt: &Arc<Graph>,
        nodes: &[(u64, u64)],
        edges: &[(u64, u64)],
    ) -> Morphism {
        Morphism::new(
            src.clone(),
            tgt.clone(),
            nodes.iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect(),
            edges.iter().map(|&(a, b)| (EdgeId(a), EdgeId(b))).collect(),
        )
    }

    fn identity_square(g: &Arc<Graph>) -> Square {
        let id = Morphism::identity(g);
        Square::new(id.clone(), id.clone(), id.clone(), id)
    }

    #[test]
    fn identity_square_passes_everything() {
        let g = arc(Graph::build(&[(0, "a"), (1, "b")], &[(0, 0, 1, "x")]));
        let sq = identity_square(&g);
        assert!(commutes(&sq).unwrap().verdict);
        assert!(reduced_chain_condition(&sq).verdict);
        assert!(is_pushout_injective(&sq).unwrap().verdict);
        assert!(is_pullback(&sq).unwrap().verdict);
    }

    #[test]
    fn perturbed_square_does_not_commute() {
        let g = arc(Graph::build(&[(0, "a"), (1, "a")], &[]));
        let id = Morphism::identity(&g);
        let swap = morph(&g, &g, &[(0, 1), (1, 0)], &[]);
        let sq = Square::new(id.clone(), id.clone(), swap, id);
        let report = commutes(&sq).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.counterexample, Some(vec![ItemRef::Node(NodeId(0))]));
    }

    #[test]
    fn empty_apex_breaks_reduced_chain_condition() {
        let a = arc(Graph::new());
        let b = arc(Graph::build(&[(0, "a")], &[]));
        let c = arc(Graph::build(&[(0, "a")], &[]));
        let d = arc(Graph::build(&[(0, "a")], &[]));
        let sq = Square::new(
            morph(&a, &b, &[], &[]),
            morph(&a, &c, &[], &[]),
            morph(&b, &d, &[(0, 0)], &[]),
            morph(&c, &d, &[(0, 0)], &[]),
        );
        assert!(commutes(&sq).unwrap().verdict);
        let report = reduced_chain_condition(&sq);
        assert!(!report.verdict);
        assert_eq!(
            report.counterexample,
            Some(vec![ItemRef::Node(NodeId(0)), ItemRef::Node(NodeId(0))])
        );
    }

    #[test]
    fn unreached_node_breaks_joint_surjectivity() {
        let g = arc(Graph::build(&[(0, "a")], &[]));
        let big = arc(Graph::build(&[(0, "a"), (1, "b")], &[]));
        let inc = Morphism::inclusion(&g, &big);
        let report = jointly_surjective(&inc, &inc).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.counterexample, Some(vec![ItemRef::Node(NodeId(1))]));

        let sq = Square::new(
            Morphism::identity(&g),
            Morphism::identity(&g),
            inc.clone(),
            inc,
        );
        let report = is_pushout_injective(&sq).unwrap();
        assert_eq!(report.failed_clause.as_deref(), Some("joint surjectivity"));
    }

    #[test]
    fn surjective_leg_alone_is_jointly_surjective() {
        let g = arc(Graph::build(&[(0, "a")], &[]));
        let e = arc(Graph::new());
        let id = Morphism::identity(&g);
        let empty = morph(&e, &g, &[], &[]);
        assert!(jointly_surjective(&id, &empty).unwrap().verdict);
    }

    #[test]
    fn joint_surjectivity_needs_common_target() {
        let g = arc(Graph::build(&[(0, "a")], &[]));
        let h = arc(Graph::build(&[(0, "b")], &[]));
        assert!(jointly_surjective(&Morphism::identity(&g), &Morphism::identity(&h)).is_err());
    }

    #[test]
    fn non_injective_square_is_out_of_scope() {
        let two = arc(Graph::build(&[(0, "a"), (1, "a")], &[]));
        let one = arc(Graph::build(&[(0, "a")], &[]));
        let fold = morph(&two, &one, &[(0, 0), (1, 0)], &[]);
        let id2 = Morphism::identity(&two);
        let id1 = Morphism::identity(&one);
        let sq = Square::new(id2.clone(), fold.clone(), fold, id1);
        assert!(matches!(is_pushout_injective(&sq), Err(Error::Scope(_))));
    }

    #[test]
    fn wiring_mismatch_is_a_precondition_error() {
        let g = arc(Graph::build(&[(0, "a")], &[]));
        let h = arc(Graph::build(&[(0, "b")], &[]));
        let sq = Square::new(
            Morphism::identity(&g),
            Morphism::identity(&g),
            Morphism::identity(&h),
            Morphism::identity(&g),
        );
        assert!(matches!(commutes(&sq), Err(Error::Precondition(_))));
    }

    #[test]
    fn canonical_pullback_square_is_recognised() {
        let d = arc(Graph::build(&[(0, "a"), (1, "b")], &[(0, 0, 1, "x")]));
        let b = arc(Graph::build(
            &[(0, "a"), (1, "a"), (2, "b")],
            &[(0, 0, 2, "x"), (1, 1, 2, "x")],
        ));
        let f = morph(&b, &d, &[(0, 0), (1, 0), (2, 1)], &[(0, 0), (1, 0)]);
        let g = Morphism::identity(&d);
        let pb = pullback_construct(&f, &g).unwrap();
        assert!(is_pullback(&pb.square()).unwrap().verdict);
        assert!(reduced_chain_condition(&pb.square()).verdict);
    }

    #[test]
    fn apex_missing_a_pair_is_not_a_pullback() {
        let d = arc(Graph::build(&[(0, "a")], &[]));
        let b = arc(Graph::build(&[(0, "a"), (1, "a")], &[]));
        let f = morph(&b, &d, &[(0, 0), (1, 0)], &[]);
        let g = Morphism::identity(&d);
        let pb = pullback_construct(&f, &g).unwrap();
        let mut smaller = (*pb.apex).clone();
        smaller.remove_node(NodeId(1));
        let smaller = arc(smaller);
        let sq = Square::new(
            pb.to_left.restrict_source(&smaller),
            pb.to_right.restrict_source(&smaller),
            f,
            g,
        );
        let report = is_pullback(&sq).unwrap();
        assert!(!report.verdict);
        assert!(report.failed_clause.unwrap().contains("not surjective"));
    }

    #[test]
    fn special_diagram_is_pullback_for_injective_m() {
        let l = arc(Graph::build(&[(0, "a"), (1, "b")], &[(0, 0, 1, "x")]));
        let g = arc(Graph::build(
            &[(3, "a"), (4, "b"), (5, "c")],
            &[(7, 3, 4, "x")],
        ));
        let m = morph(&l, &g, &[(0, 3), (1, 4)], &[(0, 7)]);
        let id = Morphism::identity(&l);
        let sq = Square::new(id.clone(), id, m.clone(), m);
        assert!(is_pullback(&sq).unwrap().verdict);
    }

    #[test]
    fn non_commuting_square_cannot_be_tested_as_pullback() {
        let g = arc(Graph::build(&[(0, "a"), (1, "a")], &[]));
        let id = Morphism::identity(&g);
        let swap = morph(&g, &g, &[(0, 1), (1, 0)], &[]);
        let sq = Square::new(id.clone(), id.clone(), swap, id);
        assert!(matches!(is_pullback(&sq), Err(Error::Precondition(_))));
    }

    #[test]
    fn composing_with_identity_square_keeps_the_first() {
        let k = arc(Graph::build(&[(0, "a")], &[]));
        let r = arc(Graph::build(&[(0, "a"), (1, "b")], &[(0, 0, 1, "x")]));
        let d = arc(Graph::build(&[(5, "a"), (6, "c")], &[]));
        let res = gluing(
            &morph(&k, &r, &[(0, 0)], &[]),
            &morph(&k, &d, &[(0, 5)], &[]),
        )
        .unwrap();
        let sq1 = res.square();
        let b = sq1.bd.source().clone();
        let dd = sq1.bd.target().clone();
        let sq2 = Square::new(
            Morphism::identity(&b),
            sq1.bd.clone(),
            sq1.bd.clone(),
            Morphism::identity(&dd),
        );
        let composed = compose_squares_horizontal(&sq1, &sq2).unwrap();
        assert!(composed.agrees_with(&sq1).unwrap());
    }

    #[test]
    fn composing_requires_shared_edge() {
        let g = arc(Graph::build(&[(0, "a"), (1, "a")], &[]));
        let id = Morphism::identity(&g);
        let swap = morph(&g, &g, &[(0, 1), (1, 0)], &[]);
        let sq1 = Square::new(id.clone(), id.clone(), id.clone(), id.clone());
        let sq2 = Square::new(id.clone(), swap, id.clone(), id);
        assert!(compose_squares_horizontal(&sq1, &sq2).is_err());
    }

    #[test]
    fn mediator_of_gluing_square() {
        let k = arc(Graph::build(&[(0, "a")], &[]));
        let r = arc(Graph::build(&[(0, "a"), (1, "b")], &[]));
        let d = arc(Graph::build(&[(0, "a"), (1, "c")], &[]));
        let res = gluing(
            &morph(&k, &r, &[(0, 0)], &[]),
            &morph(&k, &d, &[(0, 0)], &[]),
        )
        .unwrap();
        let sq = res.square();
        // The cocone into the pushout itself induces the identity.
        let u = pushout_mediator(&sq, &sq.bd, &sq.cd).unwrap();
        assert!(morphisms_agree(&u, &Morphism::identity(&res.glued)).unwrap());
    }
}
