//! Parallel and sequential independence, and commutation of independent
//! derivations into a common result graph.
//!
//! Contexts are identity-map subgraphs of their host and matches are
//! injective, so a witness morphism `L1 -> D2` can only be the match itself
//! co-restricted to `D2`. Independence therefore reduces to an image check.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{gluing, pullback_construct};
use crate::diagram::{
    compose_squares_horizontal, is_pullback, is_pushout_injective, pushout_mediator, CheckReport,
    Square,
};
use crate::error::{Error, Result};
use crate::graph::{is_isomorphic, EdgeId, Graph, IsoWitness, NodeId};
use crate::morphism::{compose, morphisms_agree, same_graph, Morphism};
use crate::rewriting::{apply, dangling_condition, DirectDerivation, Match};
use crate::validation::ItemRef;

/// Two derivations out of the same graph.
#[derive(Debug, Clone)]
pub struct ParallelPair {
    pub first: DirectDerivation,
    pub second: DirectDerivation,
}

impl ParallelPair {
    pub fn new(first: DirectDerivation, second: DirectDerivation) -> Result<ParallelPair> {
        if !same_graph(first.host(), second.host()) {
            return Err(Error::Precondition(
                "the derivations start from different graphs".into(),
            ));
        }
        Ok(ParallelPair { first, second })
    }

    pub fn swapped(&self) -> ParallelPair {
        ParallelPair {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

/// Morphisms into the other derivation's context that commute with the
/// embeddings into the shared graph.
///
/// For a parallel pair, `j1: L1 -> D2` and `j2: L2 -> D1`. For a sequence
/// `G => H => H'`, `j1: R1 -> D2` and `j2: L2 -> D1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub j1: Morphism,
    pub j2: Morphism,
}

/// `m` co-restricted to `sub`, a subgraph of `m`'s target by ids. Names the
/// first item whose image falls outside `sub`.
fn corestrict(m: &Morphism, sub: &Arc<Graph>) -> std::result::Result<Morphism, ItemRef> {
    if let Some((n, _)) = m.node_map().iter().find(|(_, img)| !sub.has_node(**img)) {
        return Err(ItemRef::Node(*n));
    }
    if let Some((e, _)) = m.edge_map().iter().find(|(_, img)| !sub.has_edge(**img)) {
        return Err(ItemRef::Edge(*e));
    }
    Ok(m.with_target(sub))
}

fn forced_witness(
    m1: &Morphism,
    d2: &Arc<Graph>,
    m2: &Morphism,
    d1: &Arc<Graph>,
) -> std::result::Result<IndependenceWitness, String> {
    let j1 = corestrict(m1, d2).map_err(|item| {
        format!("first triangle fails: image of {item} is deleted by the second derivation")
    })?;
    let j2 = corestrict(m2, d1).map_err(|item| {
        format!("second triangle fails: image of {item} is deleted by the first derivation")
    })?;
    Ok(IndependenceWitness { j1, j2 })
}

/// The forced witness for a parallel pair, or a description of the triangle
/// that cannot commute.
pub fn check_parallel_independence(
    pair: &ParallelPair,
) -> std::result::Result<IndependenceWitness, String> {
    forced_witness(
        pair.first.matching.morphism(),
        pair.second.context(),
        pair.second.matching.morphism(),
        pair.first.context(),
    )
}

pub fn parallel_independent(pair: &ParallelPair) -> Option<IndependenceWitness> {
    check_parallel_independence(pair).ok()
}

/// Witness that `second` (applied to the result of `first`) neither deletes
/// what `first` created nor needs what `first` deleted.
pub fn sequential_independent(
    first: &DirectDerivation,
    second: &DirectDerivation,
) -> Result<Option<IndependenceWitness>> {
    if !same_graph(second.host(), first.result()) {
        return Err(Error::Precondition(
            "the second derivation does not start at the first one's result".into(),
        ));
    }
    Ok(forced_witness(
        &first.comatch,
        second.context(),
        second.matching.morphism(),
        first.context(),
    )
    .ok())
}

/// `(m2', m1')`: the second rule's match moved into `H1` and the first rule's
/// match moved into `H2`, through the context inclusions.
pub fn residual_match(
    pair: &ParallelPair,
    witness: &IndependenceWitness,
) -> Result<(Match, Match)> {
    let m2 = compose(&pair.first.gluing.context_inclusion, &witness.j2)?;
    let m1 = compose(&pair.second.gluing.context_inclusion, &witness.j1)?;
    let m2 = Match::new(m2)
        .map_err(|e| Error::Internal(format!("residual of the second match: {e}")))?;
    let m1 =
        Match::new(m1).map_err(|e| Error::Internal(format!("residual of the first match: {e}")))?;
    for (rule, m, which) in [
        (&pair.second.rule, &m2, "second"),
        (&pair.first.rule, &m1, "first"),
    ] {
        let report = dangling_condition(rule, m);
        if !report.verdict {
            return Err(Error::Internal(format!(
                "residual of the {which} match dangles: {report}"
            )));
        }
    }
    Ok((m2, m1))
}

/// The common result of an independent pair.
#[derive(Debug, Clone)]
pub struct CommutationResult {
    /// `G'`, the result of `e1`.
    pub gp: Arc<Graph>,
    /// `H1 => G'` by the second rule.
    pub e1: DirectDerivation,
    /// `H2 => G''` by the first rule.
    pub e2: DirectDerivation,
    /// `G' -> G''`
    pub iso: IsoWitness,
}

/// Applies each rule to the other's result at the residual match and
/// compares the two outcomes.
///
/// The returned isomorphism is the canonical one: it fixes the items common
/// to both contexts and matches items created by the same rule.
pub fn commute(pair: &ParallelPair) -> Result<CommutationResult> {
    let witness = check_parallel_independence(pair).map_err(Error::Dependent)?;
    let (m2, m1) = residual_match(pair, &witness)?;
    let internal = |e: Error| Error::Internal(format!("residual application failed: {e}"));
    let e1 = apply(&pair.second.rule, &m2).map_err(internal)?;
    let e2 = apply(&pair.first.rule, &m1).map_err(internal)?;

    let psi = canonical_iso(pair, &e1, &e2)?;
    if is_isomorphic(e1.result(), e2.result()).is_none() {
        return Err(Error::Internal(
            "isomorphism search disagrees with the canonical map".into(),
        ));
    }
    for (d, e, which) in [(&pair.first, &e1, "first"), (&pair.second, &e2, "second")] {
        if sequential_independent(d, e)?.is_none() {
            return Err(Error::Internal(format!(
                "{which} composite is not sequentially independent"
            )));
        }
    }
    Ok(CommutationResult {
        gp: e1.result().clone(),
        iso: IsoWitness {
            node_map: psi.node_map().clone(),
            edge_map: psi.edge_map().clone(),
        },
        e1,
        e2,
    })
}

/// Sends common context items to themselves and items created by either
/// rule to the matching item on the other side.
fn canonical_iso(
    pair: &ParallelPair,
    e1: &DirectDerivation,
    e2: &DirectDerivation,
) -> Result<Morphism> {
    let (d1, d2) = (&pair.first, &pair.second);
    let invert_nodes = |m: &Morphism| -> BTreeMap<NodeId, NodeId> {
        m.node_map().iter().map(|(a, b)| (*b, *a)).collect()
    };
    let invert_edges = |m: &Morphism| -> BTreeMap<EdgeId, EdgeId> {
        m.edge_map().iter().map(|(a, b)| (*b, *a)).collect()
    };
    let missing = |what: String| Error::Internal(format!("no canonical image for {what}"));

    let (h1_inv_n, h1_inv_e) = (invert_nodes(&d1.comatch), invert_edges(&d1.comatch));
    let (f1_inv_n, f1_inv_e) = (invert_nodes(&e1.comatch), invert_edges(&e1.comatch));

    let mut nodes = BTreeMap::new();
    for x in e1.result().node_ids() {
        let image = if e1.context().has_node(x) {
            if d1.context().has_node(x) {
                Some(x)
            } else {
                h1_inv_n.get(&x).and_then(|y| e2.comatch.node(*y))
            }
        } else {
            f1_inv_n.get(&x).and_then(|z| d2.comatch.node(*z))
        };
        nodes.insert(x, image.ok_or_else(|| missing(format!("node {}", x.0)))?);
    }
    let mut edges = BTreeMap::new();
    for x in e1.result().edge_ids() {
        let image = if e1.context().has_edge(x) {
            if d1.context().has_edge(x) {
                Some(x)
            } else {
                h1_inv_e.get(&x).and_then(|y| e2.comatch.edge(*y))
            }
        } else {
            f1_inv_e.get(&x).and_then(|z| d2.comatch.edge(*z))
        };
        edges.insert(x, image.ok_or_else(|| missing(format!("edge {}", x.0)))?);
    }
    let psi = Morphism::new(e1.result().clone(), e2.result().clone(), nodes, edges);
    let report = psi.validate();
    if !report.is_ok() || !psi.is_bijective() {
        return Err(Error::Internal(format!(
            "canonical comparison map is not an isomorphism: {report}"
        )));
    }
    Ok(psi)
}

/// One labelled check of the decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledCheck {
    pub label: String,
    pub report: CheckReport,
}

/// Every labelled check plus an overall verdict naming the first failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationCheck {
    pub squares: Vec<LabelledCheck>,
    pub summary: CheckReport,
}

impl CommutationCheck {
    pub fn get(&self, label: &str) -> Option<&CheckReport> {
        self.squares
            .iter()
            .find(|c| c.label == label)
            .map(|c| &c.report)
    }
}

/// Square labels list the four corners in the order `A, B, C, D`.
pub mod labels {
    pub const CONTEXT_PULLBACK: &str = "D,D1,D2,G pullback";
    pub const CONTEXT_PUSHOUT: &str = "D,D2,D1,G";
    pub const LEFT_1: &str = "K1,D,L1,D2";
    pub const LEFT_2: &str = "K2,D,L2,D1";
    pub const RIGHT_1: &str = "K1,D,R1,Dbar2";
    pub const RIGHT_2: &str = "K2,D,R2,Dbar1";
    pub const RESIDUAL_1: &str = "D,D1,Dbar2,H1";
    pub const RESIDUAL_2: &str = "D,D2,Dbar1,H2";
    pub const FINAL: &str = "D,Dbar2,Dbar1,G'";
    pub const SPLIT_LEFT_1: &str = "G=>H1 left = K1,D,L1,D2 + D,D1,D2,G";
    pub const SPLIT_LEFT_2: &str = "G=>H2 left = K2,D,L2,D1 + D,D2,D1,G";
    pub const SPLIT_RIGHT_1: &str = "G=>H1 right = K1,D,R1,Dbar2 + D,D1,Dbar2,H1";
    pub const SPLIT_RIGHT_2: &str = "G=>H2 right = K2,D,R2,Dbar1 + D,D2,Dbar1,H2";
    pub const NEXT_LEFT_1: &str = "H1=>G' left = K2,D,L2,D1 + D,Dbar2,D1,H1";
    pub const NEXT_RIGHT_1: &str = "H1=>G' right = K2,D,R2,Dbar1 + D,Dbar2,Dbar1,G'";
    pub const NEXT_LEFT_2: &str = "H2=>G'' left = K1,D,L1,D2 + D,Dbar1,D2,H2";
    pub const NEXT_RIGHT_2: &str = "H2=>G'' right = K1,D,R1,Dbar2 + D,Dbar1,Dbar2,G'";
}

/// Error outcomes of a check become failing reports so that every label
/// still receives a verdict.
fn as_report(outcome: Result<CheckReport>) -> CheckReport {
    outcome.unwrap_or_else(|e| CheckReport::fail(e.to_string(), Vec::new()))
}

/// First item on which two squares with the same corners differ.
fn compare_squares(actual: &Square, expected: &Square) -> Result<CheckReport> {
    let pairs = [
        (&actual.ab, &expected.ab, "A->B"),
        (&actual.ac, &expected.ac, "A->C"),
        (&actual.bd, &expected.bd, "B->D"),
        (&actual.cd, &expected.cd, "C->D"),
    ];
    for (x, y, name) in pairs {
        if !morphisms_agree(x, y)? {
            let g = x.source();
            let item = g
                .node_ids()
                .find(|n| x.node(*n) != y.node(*n))
                .map(ItemRef::Node)
                .or_else(|| {
                    g.edge_ids()
                        .find(|e| x.edge(*e) != y.edge(*e))
                        .map(ItemRef::Edge)
                });
            return Ok(CheckReport::fail(
                format!("composite differs from the derivation square on {name}"),
                item.into_iter().collect(),
            ));
        }
    }
    Ok(CheckReport::pass())
}

/// Replaces the corner `B` of `sq` through the isomorphism `iso: B -> B'`.
fn transport_b(sq: &Square, iso: &Morphism) -> Result<Square> {
    Ok(Square::new(
        compose(iso, &sq.ab)?,
        sq.ac.clone(),
        compose(&sq.bd, &iso.invert()?)?,
        sq.cd.clone(),
    ))
}

/// Replaces the corner `D` of `sq` through the isomorphism `iso: D -> D'`.
fn transport_d(sq: &Square, iso: &Morphism) -> Result<Square> {
    Ok(Square::new(
        sq.ab.clone(),
        sq.ac.clone(),
        compose(iso, &sq.bd)?,
        compose(iso, &sq.cd)?,
    ))
}

/// Rebuilds the decomposition of both derivations along the intersection
/// `D` of their contexts and checks every piece.
///
/// `D` is the pullback of the two context inclusions into `G`. The first
/// derivation's squares split along `D` into `K1,D,L1,D2` over the context
/// pullback and `K1,D,R1,Dbar2` over `D,D1,Dbar2,H1`, where `Dbar2` glues
/// `R1` to `D`; the second derivation splits symmetrically. The final square
/// `D,Dbar2,Dbar1,G'` glues the two partial results. Each composite is
/// compared with the square it should reproduce, transporting `Dbar2` and
/// `Dbar1` to the contexts of the residual derivations.
pub fn verify_commutation_squares(
    pair: &ParallelPair,
    witness: &IndependenceWitness,
    result: &CommutationResult,
) -> Result<CommutationCheck> {
    use labels::*;

    let (d1, d2) = (&pair.first, &pair.second);
    let (e1, e2) = (&result.e1, &result.e2);
    let mut checks: Vec<LabelledCheck> = Vec::new();
    let mut record = |label: &str, report: CheckReport| {
        checks.push(LabelledCheck {
            label: label.to_string(),
            report,
        })
    };

    let pb = pullback_construct(
        &d1.deletion.context_inclusion,
        &d2.deletion.context_inclusion,
    )?;
    let (to_d1, to_d2) = (&pb.to_left, &pb.to_right);
    let context_square = pb.square();
    record(CONTEXT_PULLBACK, as_report(is_pullback(&context_square)));
    let context_transposed = context_square.transpose();
    record(
        CONTEXT_PUSHOUT,
        as_report(is_pushout_injective(&context_transposed)),
    );

    // Interfaces into D through the pullback's pairing.
    let (b1, b2) = (&d1.rule.left, &d2.rule.left);
    let k1_d = pb.mediator(
        &d1.deletion.interface_to_context,
        &compose(&witness.j1, b1)?,
    )?;
    let k2_d = pb.mediator(
        &compose(&witness.j2, b2)?,
        &d2.deletion.interface_to_context,
    )?;

    let left1 = Square::new(k1_d.clone(), b1.clone(), to_d2.clone(), witness.j1.clone());
    let left2 = Square::new(k2_d.clone(), b2.clone(), to_d1.clone(), witness.j2.clone());
    record(LEFT_1, as_report(is_pushout_injective(&left1)));
    record(LEFT_2, as_report(is_pushout_injective(&left2)));

    record(
        SPLIT_LEFT_1,
        as_report(
            compose_squares_horizontal(&left1, &context_square)
                .and_then(|s| compare_squares(&s, &d1.left_square().transpose())),
        ),
    );
    record(
        SPLIT_LEFT_2,
        as_report(
            compose_squares_horizontal(&left2, &context_transposed)
                .and_then(|s| compare_squares(&s, &d2.left_square().transpose())),
        ),
    );

    // Partial results: each right-hand side glued onto the common context.
    let glue1 = gluing(&d1.rule.right, &k1_d)?;
    let glue2 = gluing(&d2.rule.right, &k2_d)?;
    let right1 = glue1.square().transpose();
    let right2 = glue2.square().transpose();
    record(RIGHT_1, as_report(is_pushout_injective(&right1)));
    record(RIGHT_2, as_report(is_pushout_injective(&right2)));

    let u2 = pushout_mediator(
        &glue1.square(),
        &d1.comatch,
        &compose(&d1.gluing.context_inclusion, to_d1)?,
    )?;
    let u1 = pushout_mediator(
        &glue2.square(),
        &d2.comatch,
        &compose(&d2.gluing.context_inclusion, to_d2)?,
    )?;
    let residual1 = Square::new(
        to_d1.clone(),
        glue1.context_inclusion.clone(),
        d1.gluing.context_inclusion.clone(),
        u2.clone(),
    );
    let residual2 = Square::new(
        to_d2.clone(),
        glue2.context_inclusion.clone(),
        d2.gluing.context_inclusion.clone(),
        u1.clone(),
    );
    record(RESIDUAL_1, as_report(is_pushout_injective(&residual1)));
    record(RESIDUAL_2, as_report(is_pushout_injective(&residual2)));

    record(
        SPLIT_RIGHT_1,
        as_report(
            compose_squares_horizontal(&right1, &residual1)
                .and_then(|s| compare_squares(&s, &d1.right_square().transpose())),
        ),
    );
    record(
        SPLIT_RIGHT_2,
        as_report(
            compose_squares_horizontal(&right2, &residual2)
                .and_then(|s| compare_squares(&s, &d2.right_square().transpose())),
        ),
    );

    // The partial results are the contexts of the residual derivations.
    let phi2 = u2.with_target(e1.context());
    let phi1 = u1.with_target(e2.context());
    for (phi, which) in [(&phi2, "Dbar2"), (&phi1, "Dbar1")] {
        if !phi.is_valid() || !phi.is_bijective() {
            return Err(Error::Internal(format!(
                "{which} does not match the residual derivation's context"
            )));
        }
    }

    // The final square, with both partial results mapped into G'.
    let gp = &result.gp;
    let psi = result.iso.to_morphism(e1.result(), e2.result());
    let bar2_gp = compose(&e1.gluing.context_inclusion, &phi2)?.with_target(gp);
    let bar1_gp = compose(
        &psi.invert()?,
        &compose(&e2.gluing.context_inclusion, &phi1)?,
    )?
    .with_target(gp);
    let final_square = Square::new(
        glue1.context_inclusion.clone(),
        glue2.context_inclusion.clone(),
        bar2_gp,
        bar1_gp,
    );
    record(FINAL, as_report(is_pushout_injective(&final_square)));

    record(
        NEXT_LEFT_1,
        as_report(
            compose_squares_horizontal(&left2, &residual1.transpose())
                .and_then(|s| transport_b(&s, &phi2))
                .and_then(|s| compare_squares(&s, &e1.left_square().transpose())),
        ),
    );
    record(
        NEXT_RIGHT_1,
        as_report(
            compose_squares_horizontal(&right2, &final_square)
                .and_then(|s| transport_b(&s, &phi2))
                .and_then(|s| compare_squares(&s, &e1.right_square().transpose())),
        ),
    );
    record(
        NEXT_LEFT_2,
        as_report(
            compose_squares_horizontal(&left1, &residual2.transpose())
                .and_then(|s| transport_b(&s, &phi1))
                .and_then(|s| compare_squares(&s, &e2.left_square().transpose())),
        ),
    );
    record(
        NEXT_RIGHT_2,
        as_report(
            compose_squares_horizontal(&right1, &final_square.transpose())
                .and_then(|s| transport_d(&s, &psi))
                .and_then(|s| transport_b(&s, &phi1))
                .and_then(|s| compare_squares(&s, &e2.right_square().transpose())),
        ),
    );

    let summary = checks
        .iter()
        .find(|c| !c.report.verdict)
        .map(|c| {
            let mut report = c.report.clone();
            report.failed_clause = Some(format!(
                "{}: {}",
                c.label,
                report.failed_clause.as_deref().unwrap_or("failed")
            ));
            report
        })
        .unwrap_or_else(CheckReport::pass);
    Ok(CommutationCheck {
        squares: checks,
        summary,
    })
}
