//! Rules, matches and direct derivations.
//!
//! A direct derivation first deletes the matched, non-preserved part of the
//! host graph and then glues in the right-hand side along the interface. Both
//! squares are re-checked as pushouts on every application.

use std::sync::Arc;

use crate::constructions::{
    dangling_report, deletion, gluing_with, DeletionResult, FreshIds, GluingResult,
};
use crate::diagram::{is_pushout_injective, CheckReport, Square};
use crate::error::{Error, Result};
use crate::graph::{is_isomorphic, Graph};
use crate::morphism::{enumerate_morphisms, same_graph, Morphism};
use crate::validation::{Clause, ValidationReport, Violation};

/// A span `L <-b- K -r-> R` of injective morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Arc<Graph>,
    pub interface: Arc<Graph>,
    pub rhs: Arc<Graph>,
    /// `b: K -> L`
    pub left: Morphism,
    /// `r: K -> R`
    pub right: Morphism,
}

impl Rule {
    /// Assembles a rule from its two morphisms, taking the graphs from their
    /// endpoints, and validates it.
    pub fn new(left: Morphism, right: Morphism) -> Result<Rule> {
        let rule = Rule {
            lhs: left.target().clone(),
            interface: left.source().clone(),
            rhs: right.target().clone(),
            left,
            right,
        };
        let report = validate_rule(&rule);
        if report.is_ok() {
            Ok(rule)
        } else {
            Err(Error::Precondition(format!("invalid rule: {report}")))
        }
    }

    /// `g <- g -> g` with identities: applies without changing anything.
    pub fn identity(g: &Arc<Graph>) -> Rule {
        let id = Morphism::identity(g);
        Rule {
            lhs: g.clone(),
            interface: g.clone(),
            rhs: g.clone(),
            left: id.clone(),
            right: id,
        }
    }
}

/// Checks the three graphs, both morphisms, their endpoints and injectivity.
///
/// Violations are scoped by component: `L`, `K`, `R`, `b` and `r`.
pub fn validate_rule(rule: &Rule) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.absorb("L", rule.lhs.validate());
    report.absorb("K", rule.interface.validate());
    report.absorb("R", rule.rhs.validate());
    for (m, name, target) in [(&rule.left, "b", &rule.lhs), (&rule.right, "r", &rule.rhs)] {
        if !same_graph(m.source(), &rule.interface) || !same_graph(m.target(), target) {
            report.violations.push(Violation {
                scope: name.into(),
                clause: Clause::EndpointMismatch,
                item: None,
            });
            continue;
        }
        let own = m.validate();
        let valid = own.is_ok();
        report.absorb(name, own);
        if valid && !m.is_injective() {
            report.violations.push(Violation {
                scope: name.into(),
                clause: Clause::NotInjective,
                item: None,
            });
        }
    }
    report
}

/// An injective morphism from a rule's left-hand side into a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match(Morphism);

impl Match {
    pub fn new(m: Morphism) -> Result<Match> {
        let report = m.validate();
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "match is not a valid morphism: {report}"
            )));
        }
        if !m.is_injective() {
            return Err(Error::Precondition("match is not injective".into()));
        }
        Ok(Match(m))
    }

    pub fn morphism(&self) -> &Morphism {
        &self.0
    }

    pub fn host(&self) -> &Arc<Graph> {
        self.0.target()
    }

    pub fn into_morphism(self) -> Morphism {
        self.0
    }
}

/// Every injective morphism `L -> G`, in the order of
/// [`enumerate_morphisms`]. The dangling condition is not applied here.
pub fn find_matches(rule: &Rule, host: &Arc<Graph>) -> Vec<Match> {
    enumerate_morphisms(&rule.lhs, host, true)
        .into_iter()
        .map(Match)
        .collect()
}

/// No edge outside `m(L - b(K))` is incident to a node in `m(L - b(K))`.
/// A failing report lists every dangling edge.
pub fn dangling_condition(rule: &Rule, m: &Match) -> CheckReport {
    dangling_report(&rule.left, m.morphism())
}

/// One rule application `G => H`.
#[derive(Debug, Clone)]
pub struct DirectDerivation {
    pub rule: Rule,
    pub matching: Match,
    pub deletion: DeletionResult,
    pub gluing: GluingResult,
    /// `R -> H`
    pub comatch: Morphism,
}

impl DirectDerivation {
    /// `G`
    pub fn host(&self) -> &Arc<Graph> {
        self.matching.host()
    }

    /// `D`
    pub fn context(&self) -> &Arc<Graph> {
        &self.deletion.context
    }

    /// `H`
    pub fn result(&self) -> &Arc<Graph> {
        &self.gluing.glued
    }

    /// `K -> L`, `K -> D`, `L -> G`, `D -> G`.
    pub fn left_square(&self) -> Square {
        self.deletion.square()
    }

    /// `K -> R`, `K -> D`, `R -> H`, `D -> H`.
    pub fn right_square(&self) -> Square {
        self.gluing.square()
    }
}

/// Applies `rule` at `m` with the default fresh-id allocation.
pub fn apply(rule: &Rule, m: &Match) -> Result<DirectDerivation> {
    apply_with(rule, m, FreshIds::default())
}

/// Applies `rule` at `m`, numbering created items from `fresh`.
///
/// Fails with [`Error::Dangling`] when the match violates the dangling
/// condition, and with [`Error::Internal`] if either square is not recognised
/// as a pushout.
pub fn apply_with(rule: &Rule, m: &Match, fresh: FreshIds) -> Result<DirectDerivation> {
    let report = validate_rule(rule);
    if !report.is_ok() {
        return Err(Error::Precondition(format!("invalid rule: {report}")));
    }
    if !same_graph(m.morphism().source(), &rule.lhs) {
        return Err(Error::Precondition(
            "match does not start at the rule's left-hand side".into(),
        ));
    }
    let deleted = deletion(&rule.left, m.morphism())?;
    let glued = gluing_with(&rule.right, &deleted.interface_to_context, fresh)?;
    for (square, side) in [(deleted.square(), "deletion"), (glued.square(), "gluing")] {
        let verdict = is_pushout_injective(&square)
            .map_err(|e| Error::Internal(format!("{side} square: {e}")))?;
        if !verdict.verdict {
            return Err(Error::Internal(format!(
                "{side} square is not a pushout: {verdict}"
            )));
        }
    }
    Ok(DirectDerivation {
        rule: rule.clone(),
        matching: m.clone(),
        comatch: glued.right_embedding.clone(),
        deletion: deleted,
        gluing: glued,
    })
}

/// Both contexts and both results are isomorphic.
pub fn derivations_isomorphic(d1: &DirectDerivation, d2: &DirectDerivation) -> bool {
    is_isomorphic(d1.context(), d2.context()).is_some()
        && is_isomorphic(d1.result(), d2.result()).is_some()
}
