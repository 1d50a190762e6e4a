//! Double-pushout graph transformation over finite labelled multigraphs.
//!
//! The engine builds pushouts of injective spans by gluing, pushout
//! complements by deletion and pullbacks by the pair construction. Every
//! construction is re-checked with decidable square checks. On top of that it
//! applies rules, tests independence of derivations and commutes independent
//! pairs into a common result.

pub mod constructions;
pub mod diagram;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod independence;
pub mod morphism;
pub mod rewriting;
pub mod validation;

pub use constructions::{
    deletion, gluing, gluing_with, pullback_construct, DeletionResult, FreshIds, GluingResult,
    PullbackResult,
};
pub use diagram::{
    commutes, compose_squares_horizontal, is_pullback, is_pushout_injective, jointly_surjective,
    pushout_mediator, reduced_chain_condition, CheckReport, Square,
};
pub use error::{Error, Result};
pub use graph::{is_isomorphic, Edge, EdgeId, Graph, IsoWitness, Label, NodeId};
pub use independence::{
    check_parallel_independence, commute, parallel_independent, residual_match,
    sequential_independent, verify_commutation_squares, CommutationCheck, CommutationResult,
    IndependenceWitness, LabelledCheck, ParallelPair,
};
pub use morphism::{compose, enumerate_morphisms, morphisms_agree, same_graph, Morphism};
pub use rewriting::{
    apply, apply_with, dangling_condition, derivations_isomorphic, find_matches, validate_rule,
    DirectDerivation, Match, Rule,
};
pub use validation::{Clause, ItemRef, ValidationReport, Violation};
