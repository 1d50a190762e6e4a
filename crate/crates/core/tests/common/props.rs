//! One function per property, each checking a single seeded instance and
//! explaining the first failure.

use std::sync::Arc;

use dpo_core::generate::Generator;
use dpo_core::{
    apply, apply_with, commute, commutes, compose, compose_squares_horizontal, deletion,
    derivations_isomorphic, gluing, is_isomorphic, is_pullback, is_pushout_injective,
    jointly_surjective, morphisms_agree, parallel_independent, pullback_construct,
    pushout_mediator, reduced_chain_condition, residual_match, sequential_independent,
    verify_commutation_squares, CheckReport, FreshIds, Graph, Match, Morphism,
    Result as EngineResult, Square,
};

use super::{brute_isomorphic, exhaustive_independence, mediator_counts, passing_complements};

pub type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn holds(report: EngineResult<CheckReport>, what: &str) -> Check {
    match report {
        Ok(r) if r.verdict => Ok(()),
        Ok(r) => Err(format!("{what}: {r}")),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn engine<T>(r: EngineResult<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Composites of random composable morphisms are morphisms, composition is
/// associative and preserves injectivity and surjectivity.
pub fn composition(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let h = Arc::new(gen.graph(6, 8));
    let g_to_h = gen.morphism_into(&h, 6, 8);
    let f = gen.morphism_into(g_to_h.source(), 6, 8);
    let gf = engine(compose(&g_to_h, &f), "compose")?;
    ensure(gf.validate().is_ok(), || {
        format!("composite invalid: {}", gf.validate())
    })?;
    // Re-check the axioms directly over the source graph.
    let (src, tgt) = (gf.source(), gf.target());
    for (e, edge) in src.edges() {
        let img = gf.edge(e).ok_or("edge unmapped")?;
        let target_edge = tgt.edge(img).ok_or("edge image missing")?;
        ensure(gf.node(edge.src) == Some(target_edge.src), || {
            "source not preserved".into()
        })?;
        ensure(gf.node(edge.tgt) == Some(target_edge.tgt), || {
            "target not preserved".into()
        })?;
        ensure(edge.label == target_edge.label, || {
            "edge label not preserved".into()
        })?;
    }
    for (n, label) in src.nodes() {
        let img = gf.node(n).ok_or("node unmapped")?;
        ensure(tgt.node_label(img) == Some(label), || {
            "node label not preserved".into()
        })?;
    }

    let k = Arc::new(gen.graph(6, 8));
    let h_to_k = gen.morphism_into(&k, 6, 8);
    let g_to_h = gen.morphism_into(h_to_k.source(), 6, 8);
    let f = gen.morphism_into(g_to_h.source(), 6, 8);
    let left = engine(
        compose(&h_to_k, &engine(compose(&g_to_h, &f), "compose")?),
        "compose",
    )?;
    let right = engine(
        compose(&engine(compose(&h_to_k, &g_to_h), "compose")?, &f),
        "compose",
    )?;
    ensure(engine(morphisms_agree(&left, &right), "agree")?, || {
        "not associative".into()
    })?;

    for (a, b) in [(&g_to_h, &f), (&h_to_k, &g_to_h)] {
        let ab = engine(compose(a, b), "compose")?;
        if a.is_injective() && b.is_injective() {
            ensure(ab.is_injective(), || "injectivity not preserved".into())?;
        }
        if a.is_surjective() && b.is_surjective() {
            ensure(ab.is_surjective(), || "surjectivity not preserved".into())?;
        }
    }
    Ok(())
}

/// Gluing squares pass every check and the context map is an inclusion.
pub fn gluing_square(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let (b, d) = gen.injective_span(3, 3);
    let res = engine(gluing(&b, &d), "gluing")?;
    let sq = res.square();
    ensure(res.glued.is_valid(), || "glued graph invalid".into())?;
    ensure(res.right_embedding.is_valid(), || "R -> H invalid".into())?;
    holds(commutes(&sq), "commutes")?;
    holds(Ok(reduced_chain_condition(&sq)), "reduced chain-condition")?;
    holds(jointly_surjective(&sq.bd, &sq.cd), "jointly surjective")?;
    holds(is_pushout_injective(&sq), "pushout")?;
    holds(is_pullback(&sq), "pullback")?;
    ensure(res.context_inclusion.is_inclusion(), || {
        "D -> H is not an inclusion".into()
    })?;
    ensure(res.context_inclusion.is_injective(), || {
        "D -> H not injective".into()
    })?;
    ensure(res.right_embedding.is_injective(), || {
        "R -> H not injective".into()
    })?;
    if b.is_surjective() {
        ensure(res.context_inclusion.is_surjective(), || {
            "surjectivity not transferred".into()
        })?;
    }
    Ok(())
}

/// Gluing along an identity leaves the other side unchanged.
pub fn gluing_along_identity(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let k = Arc::new(gen.graph(4, 4));
    let (_, d) = gen.extension(&k, 3, 3);
    let res = engine(gluing(&Morphism::identity(&k), &d), "gluing")?;
    ensure(is_isomorphic(&res.glued, d.target()).is_some(), || {
        "H not isomorphic to D".into()
    })?;
    ensure(res.context_inclusion.is_bijective(), || {
        "D -> H not bijective".into()
    })
}

/// Canonical pullbacks pass the pullback check and the reduced
/// chain-condition, and contain exactly the agreeing pairs.
pub fn pullback_square(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let d = Arc::new(gen.graph(4, 6));
    let f = gen.morphism_into(&d, 4, 5);
    let g = gen.morphism_into(&d, 4, 5);
    let pb = engine(pullback_construct(&f, &g), "pullback")?;
    let sq = pb.square();
    holds(is_pullback(&sq), "pullback")?;
    holds(Ok(reduced_chain_condition(&sq)), "reduced chain-condition")?;
    let expected = f
        .source()
        .node_ids()
        .flat_map(|x| g.source().node_ids().map(move |y| (x, y)))
        .filter(|(x, y)| f.node(*x) == g.node(*y))
        .count();
    ensure(pb.apex.node_count() == expected, || {
        format!(
            "{} apex nodes, {expected} agreeing pairs",
            pb.apex.node_count()
        )
    })
}

/// Pasting two gluing squares gives a pushout, and the right square can be
/// recovered from the outer one and the left one.
pub fn pushout_pasting(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let (b, d) = gen.injective_span(3, 2);
    let inner = engine(gluing(&b, &d), "inner gluing")?;
    let (_, e) = gen.extension(b.target(), 2, 2);
    let right = engine(gluing(&e, &inner.right_embedding), "right gluing")?;
    let (sq1, sq2) = (inner.square(), right.square());
    let pasted = engine(compose_squares_horizontal(&sq1, &sq2), "paste")?;
    holds(is_pushout_injective(&pasted), "pasted pushout")?;

    // Decomposition: outer and left given, right assembled from them.
    let outer = engine(
        gluing(&engine(compose(&e, &b), "compose")?, &d),
        "outer gluing",
    )?;
    let e_to_f = &outer.right_embedding;
    let h_to_f = engine(
        pushout_mediator(
            &sq1,
            &engine(compose(e_to_f, &e), "compose")?,
            &outer.context_inclusion,
        ),
        "mediator",
    )?;
    let recovered = Square::new(
        e.clone(),
        inner.right_embedding.clone(),
        e_to_f.clone(),
        h_to_f,
    );
    holds(is_pushout_injective(&recovered), "recovered right square")
}

/// Pasting two canonical pullbacks gives a pullback, and the left square can
/// be recovered from the outer one and the right one.
pub fn pullback_pasting(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let f = Arc::new(gen.graph(3, 5));
    let e_f = gen.morphism_into(&f, 3, 4);
    let d_f = gen.morphism_into(&f, 3, 4);
    let c_d = gen.morphism_into(d_f.source(), 3, 4);

    let right = engine(pullback_construct(&e_f, &d_f), "right pullback")?;
    // Left square: pullback of P -> D along C -> D, so its B->D is the right
    // square's A->C.
    let left = engine(pullback_construct(&right.to_right, &c_d), "left pullback")?;
    let (sq1, sq2) = (left.square(), right.square());
    let pasted = engine(compose_squares_horizontal(&sq1, &sq2), "paste")?;
    holds(is_pullback(&pasted), "pasted pullback")?;

    // Decomposition: the outer pullback and the right one determine the left.
    let outer = engine(
        pullback_construct(&e_f, &engine(compose(&d_f, &c_d), "compose")?),
        "outer pullback",
    )?;
    let a_to_p = engine(
        right.mediator(
            &outer.to_left,
            &engine(compose(&c_d, &outer.to_right), "compose")?,
        ),
        "mediator",
    )?;
    let recovered = Square::new(
        a_to_p,
        outer.to_right.clone(),
        right.to_right.clone(),
        c_d.clone(),
    );
    holds(is_pullback(&recovered), "recovered left square")
}

/// `L -id- L -id- L`, `m`, `m` is a pullback for injective `m`.
pub fn special_pullback(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let l = Arc::new(gen.graph(4, 5));
    let (_, m) = gen.extension(&l, 3, 3);
    let id = Morphism::identity(&l);
    holds(
        is_pullback(&Square::new(id.clone(), id, m.clone(), m)),
        "special pullback",
    )
}

/// In a pushout square, surjective (injective) `A -> B` gives surjective
/// (injective) `C -> D`.
pub fn preservation(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let k = Arc::new(gen.graph(3, 3));
    let (_, d) = gen.extension(&k, 3, 3);
    // A bijective A -> B: an extension by nothing, which only renumbers.
    let (_, b) = gen.extension(&k, 0, 0);
    let sq = engine(gluing(&b, &d), "gluing")?.square();
    holds(is_pushout_injective(&sq), "pushout")?;
    ensure(sq.ab.is_surjective(), || {
        "premise: A -> B not surjective".into()
    })?;
    ensure(sq.cd.is_surjective(), || "C -> D not surjective".into())?;

    let (b, d) = gen.injective_span(3, 3);
    let sq = engine(gluing(&b, &d), "gluing")?.square();
    ensure(sq.cd.is_injective(), || "C -> D not injective".into())
}

/// Applying twice with different fresh-id offsets gives isomorphic
/// derivations, and both squares of each are pushouts and pullbacks.
pub fn derivation_uniqueness(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let Some(d1) = gen.derivation(3, 3, 200) else {
        return Err("no applicable instance generated".into());
    };
    ensure(d1.host().node_count() <= 6 + 3, || "host too large".into())?;
    let offset = 1 + seed % 50;
    let d2 = engine(
        apply_with(&d1.rule, &d1.matching, FreshIds::with_offset(offset)),
        "apply",
    )?;
    ensure(derivations_isomorphic(&d1, &d2), || {
        "derivations not isomorphic".into()
    })?;
    for sq in [d1.left_square(), d1.right_square()] {
        holds(is_pushout_injective(&sq), "pushout")?;
        holds(is_pullback(&sq), "pullback")?;
    }
    ensure(d1.comatch.is_injective(), || "comatch not injective".into())
}

/// All subgraph contexts passing the pushout check are isomorphic to the
/// constructed one; none pass when the dangling condition fails.
pub fn complement_uniqueness(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let rule = gen.rule(2, 2);
    let m = gen.host_for(&rule, 1, 2);
    let passing = passing_complements(&rule.left, m.morphism());
    match deletion(&rule.left, m.morphism()) {
        Ok(del) => {
            ensure(!passing.is_empty(), || {
                "constructed context not among candidates".into()
            })?;
            for d in &passing {
                ensure(is_isomorphic(d, &del.context).is_some(), || {
                    "a passing candidate differs from the constructed context".into()
                })?;
            }
            Ok(())
        }
        Err(dpo_core::Error::Dangling(_)) => ensure(passing.is_empty(), || {
            "a complement passes despite dangling edges".into()
        }),
        Err(e) => Err(format!("deletion: {e}")),
    }
}

/// Size of the host in the last `complement_uniqueness` instance; used to
/// keep the acceptance corpus inside its size bound.
pub fn complement_host_nodes(seed: u64) -> usize {
    let mut gen = Generator::new(seed);
    let rule = gen.rule(2, 2);
    gen.host_for(&rule, 1, 2).host().node_count()
}

/// Every commuting cospan out of a gluing square factors through exactly
/// one mediating morphism, for each graph of the probe family.
pub fn universal_property(seed: u64, family: &[Arc<Graph>]) -> Check {
    let mut gen = Generator::new(seed);
    let (b, d) = gen.injective_span(3, 3);
    let sq = engine(gluing(&b, &d), "gluing")?.square();
    for x in family {
        for count in mediator_counts(&sq, x) {
            ensure(count == 1, || format!("{count} mediating morphisms"))?;
        }
    }
    Ok(())
}

/// Diamond property with sequential independence and the decomposition
/// check.
pub fn church_rosser(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let pair = gen
        .independent_pair(2, 2, 200)
        .ok_or("no independent pair generated")?;
    let witness = parallel_independent(&pair).ok_or("pair not independent")?;
    let (m2, m1) = engine(residual_match(&pair, &witness), "residual match")?;
    for m in [&m2, &m1] {
        ensure(
            m.morphism().is_valid() && m.morphism().is_injective(),
            || "residual match invalid".into(),
        )?;
    }
    let result = engine(commute(&pair), "commute")?;
    ensure(
        is_isomorphic(result.e1.result(), result.e2.result()).is_some(),
        || "results not isomorphic".into(),
    )?;
    for (d, e) in [(&pair.first, &result.e1), (&pair.second, &result.e2)] {
        ensure(
            engine(sequential_independent(d, e), "sequential")?.is_some(),
            || "composite not sequentially independent".into(),
        )?;
    }
    let check = engine(
        verify_commutation_squares(&pair, &witness, &result),
        "verify",
    )?;
    ensure(check.summary.verdict, || {
        format!("decomposition: {}", check.summary)
    })?;

    let swapped = engine(commute(&pair.swapped()), "commute swapped")?;
    ensure(is_isomorphic(&swapped.gp, &result.gp).is_some(), || {
        "swapped pair gives a different result".into()
    })
}

/// Isomorphism search agrees with the permutation oracle.
pub fn iso_agreement(g: &Graph, h: &Graph) -> Check {
    let fast = is_isomorphic(g, h);
    let slow = brute_isomorphic(g, h);
    ensure(fast.is_some() == slow, || {
        format!("search says {}, oracle says {slow}", fast.is_some())
    })?;
    if let Some(w) = fast {
        let m = w.to_morphism(&Arc::new(g.clone()), &Arc::new(h.clone()));
        ensure(m.is_valid() && m.is_bijective(), || {
            "witness is not an isomorphism".into()
        })?;
    }
    Ok(())
}

/// Forced-candidate independence agrees with exhaustive witness search, on
/// pairs that may or may not be independent.
pub fn independence_agreement(seed: u64) -> Check {
    let mut gen = Generator::new(seed);
    let p1 = gen.rule(2, 2);
    let p2 = gen.rule(2, 2);
    let m1 = gen.host_for(&p1, 2, 2);
    let host = m1.host().clone();
    let Ok(d1) = apply(&p1, &m1) else {
        return Ok(());
    };
    for m2 in dpo_core::find_matches(&p2, &host) {
        let Ok(d2) = apply(&p2, &m2) else { continue };
        let pair = engine(dpo_core::ParallelPair::new(d1.clone(), d2), "pair")?;
        let forced = parallel_independent(&pair).is_some();
        let exhaustive = exhaustive_independence(&pair);
        ensure(forced == exhaustive, || {
            format!("forced says {forced}, exhaustive says {exhaustive}")
        })?;
    }
    Ok(())
}

/// A match that is valid, used by tests that need one without generating.
pub fn identity_match(g: &Arc<Graph>) -> Match {
    Match::new(Morphism::identity(g)).expect("identity is injective")
}
