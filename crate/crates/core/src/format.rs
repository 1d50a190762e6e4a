//! JSON documents for graphs, morphisms, rules, squares and reports.
//!
//! Parsing only enforces what the document shape can express: ids are
//! non-negative integers and unique per item kind. Structural problems such
//! as an edge whose source is not a node are left to validation, so that
//! they can be reported clause by clause.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::{CheckReport, Square};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, IsoWitness, NodeId};
use crate::independence::{CommutationCheck, CommutationResult, LabelledCheck};
use crate::morphism::Morphism;
use crate::rewriting::{DirectDerivation, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: u64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: u64,
    pub src: u64,
    pub tgt: u64,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default)]
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            nodes: g
                .nodes()
                .map(|(id, label)| NodeDoc {
                    id: id.0,
                    label: label.as_str().to_string(),
                })
                .collect(),
            edges: g
                .edges()
                .map(|(id, e)| EdgeDoc {
                    id: id.0,
                    src: e.src.0,
                    tgt: e.tgt.0,
                    label: e.label.as_str().to_string(),
                })
                .collect(),
        }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::new();
        for n in &self.nodes {
            if g.insert_node(NodeId(n.id), n.label.as_str()).is_some() {
                return Err(Error::Format(format!("duplicate node id {}", n.id)));
            }
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.id) {
                return Err(Error::Format(format!("duplicate edge id {}", e.id)));
            }
            g.insert_edge(EdgeId(e.id), NodeId(e.src), NodeId(e.tgt), e.label.as_str());
        }
        Ok(g)
    }
}

/// Node and edge maps; keys are written as strings, as JSON requires.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    #[serde(default)]
    pub fv: BTreeMap<u64, u64>,
    #[serde(default)]
    pub fe: BTreeMap<u64, u64>,
}

impl From<&Morphism> for MorphismDoc {
    fn from(m: &Morphism) -> Self {
        MorphismDoc {
            fv: m.node_map().iter().map(|(a, b)| (a.0, b.0)).collect(),
            fe: m.edge_map().iter().map(|(a, b)| (a.0, b.0)).collect(),
        }
    }
}

impl MorphismDoc {
    /// Attaches the maps to their endpoints without validating them.
    pub fn to_morphism(&self, source: &Arc<Graph>, target: &Arc<Graph>) -> Morphism {
        Morphism::new(
            source.clone(),
            target.clone(),
            self.fv
                .iter()
                .map(|(a, b)| (NodeId(*a), NodeId(*b)))
                .collect(),
            self.fe
                .iter()
                .map(|(a, b)| (EdgeId(*a), EdgeId(*b)))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    #[serde(rename = "L")]
    pub lhs: GraphDoc,
    #[serde(rename = "K")]
    pub interface: GraphDoc,
    #[serde(rename = "R")]
    pub rhs: GraphDoc,
    pub b: MorphismDoc,
    pub r: MorphismDoc,
}

impl From<&Rule> for RuleDoc {
    fn from(rule: &Rule) -> Self {
        RuleDoc {
            lhs: GraphDoc::from(&*rule.lhs),
            interface: GraphDoc::from(&*rule.interface),
            rhs: GraphDoc::from(&*rule.rhs),
            b: MorphismDoc::from(&rule.left),
            r: MorphismDoc::from(&rule.right),
        }
    }
}

impl RuleDoc {
    /// Builds the rule without validating it; see
    /// [`crate::rewriting::validate_rule`].
    pub fn to_rule(&self) -> Result<Rule> {
        let lhs = Arc::new(self.lhs.to_graph()?);
        let interface = Arc::new(self.interface.to_graph()?);
        let rhs = Arc::new(self.rhs.to_graph()?);
        Ok(Rule {
            left: self.b.to_morphism(&interface, &lhs),
            right: self.r.to_morphism(&interface, &rhs),
            lhs,
            interface,
            rhs,
        })
    }
}

/// A document either written inline or stored in a file, given by a path
/// relative to the referring document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

// Goes through `serde_json::Value` rather than `#[serde(untagged)]`: the
// buffered form of untagged enums cannot read integer map keys back from
// their string spelling.
impl<'de, T: for<'a> Deserialize<'a>> Deserialize<'de> for Ref<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(path) => Ok(Ref::Path(path)),
            other => serde_json::from_value(other)
                .map(Ref::Inline)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl<T: for<'de> Deserialize<'de> + Clone> Ref<T> {
    fn resolve(&self, base: &Path) -> Result<T> {
        match self {
            Ref::Inline(doc) => Ok(doc.clone()),
            Ref::Path(p) => read_json(&base.join(p)),
        }
    }
}

/// Four graphs and four morphisms; see [`Square`] for the orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDoc {
    #[serde(rename = "A")]
    pub a: Ref<GraphDoc>,
    #[serde(rename = "B")]
    pub b: Ref<GraphDoc>,
    #[serde(rename = "C")]
    pub c: Ref<GraphDoc>,
    #[serde(rename = "D")]
    pub d: Ref<GraphDoc>,
    pub ab: Ref<MorphismDoc>,
    pub ac: Ref<MorphismDoc>,
    pub bd: Ref<MorphismDoc>,
    pub cd: Ref<MorphismDoc>,
}

impl SquareDoc {
    /// Writes every part inline.
    pub fn inline(sq: &Square) -> SquareDoc {
        let g = |m: &Arc<Graph>| Ref::Inline(GraphDoc::from(&**m));
        let m = |m: &Morphism| Ref::Inline(MorphismDoc::from(m));
        SquareDoc {
            a: g(sq.ab.source()),
            b: g(sq.ab.target()),
            c: g(sq.ac.target()),
            d: g(sq.bd.target()),
            ab: m(&sq.ab),
            ac: m(&sq.ac),
            bd: m(&sq.bd),
            cd: m(&sq.cd),
        }
    }

    /// Builds the square, resolving file references against `base`.
    pub fn to_square(&self, base: &Path) -> Result<Square> {
        let graph = |r: &Ref<GraphDoc>| -> Result<Arc<Graph>> {
            Ok(Arc::new(r.resolve(base)?.to_graph()?))
        };
        let (a, b, c, d) = (
            graph(&self.a)?,
            graph(&self.b)?,
            graph(&self.c)?,
            graph(&self.d)?,
        );
        Ok(Square::new(
            self.ab.resolve(base)?.to_morphism(&a, &b),
            self.ac.resolve(base)?.to_morphism(&a, &c),
            self.bd.resolve(base)?.to_morphism(&b, &d),
            self.cd.resolve(base)?.to_morphism(&c, &d),
        ))
    }
}

/// Everything constructed by one rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    #[serde(rename = "G")]
    pub host: GraphDoc,
    #[serde(rename = "D")]
    pub context: GraphDoc,
    #[serde(rename = "H")]
    pub result: GraphDoc,
    /// `K -> L`
    pub b: MorphismDoc,
    /// `K -> R`
    pub r: MorphismDoc,
    /// `L -> G`
    pub m: MorphismDoc,
    /// `K -> D`
    pub d: MorphismDoc,
    /// `D -> G`
    pub context_to_host: MorphismDoc,
    /// `D -> H`
    pub context_to_result: MorphismDoc,
    /// `R -> H`
    pub comatch: MorphismDoc,
    pub left_square: CheckReport,
    pub right_square: CheckReport,
}

impl DerivationTrace {
    pub fn new(d: &DirectDerivation, left_square: CheckReport, right_square: CheckReport) -> Self {
        DerivationTrace {
            host: GraphDoc::from(&**d.host()),
            context: GraphDoc::from(&**d.context()),
            result: GraphDoc::from(&**d.result()),
            b: MorphismDoc::from(&d.rule.left),
            r: MorphismDoc::from(&d.rule.right),
            m: MorphismDoc::from(d.matching.morphism()),
            d: MorphismDoc::from(&d.deletion.interface_to_context),
            context_to_host: MorphismDoc::from(&d.deletion.context_inclusion),
            context_to_result: MorphismDoc::from(&d.gluing.context_inclusion),
            comatch: MorphismDoc::from(&d.comatch),
            left_square,
            right_square,
        }
    }
}

/// Result graph, residual matches, the isomorphism between the two results
/// and the decomposition checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationReport {
    #[serde(rename = "G_prime")]
    pub result: GraphDoc,
    /// `L2 -> H1`
    pub residual_second: MorphismDoc,
    /// `L1 -> H2`
    pub residual_first: MorphismDoc,
    pub iso: IsoWitness,
    pub squares: Vec<LabelledCheck>,
    pub summary: CheckReport,
}

impl CommutationReport {
    pub fn new(result: &CommutationResult, check: &CommutationCheck) -> Self {
        CommutationReport {
            result: GraphDoc::from(&*result.gp),
            residual_second: MorphismDoc::from(result.e1.matching.morphism()),
            residual_first: MorphismDoc::from(result.e2.matching.morphism()),
            iso: result.iso.clone(),
            squares: check.squares.clone(),
            summary: check.summary.clone(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    read_json::<GraphDoc>(path)?.to_graph()
}

pub fn read_rule(path: &Path) -> Result<Rule> {
    read_json::<RuleDoc>(path)?.to_rule()
}

pub fn read_square(path: &Path) -> Result<Square> {
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    read_json::<SquareDoc>(path)?.to_square(&base)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}
