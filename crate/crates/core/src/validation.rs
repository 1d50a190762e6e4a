use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, NodeId};

/// A reference to a single node or edge, used when reporting problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemRef {
    Node(NodeId),
    Edge(EdgeId),
}

impl fmt::Display for ItemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemRef::Node(n) => write!(f, "node {}", n.0),
            ItemRef::Edge(e) => write!(f, "edge {}", e.0),
        }
    }
}

/// The clause of a definition that a value fails to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    SrcOutOfV,
    TgtOutOfV,
    /// A morphism has no image for a source item.
    NotTotal,
    /// A morphism maps an id that is not an item of its source graph.
    OutsideDomain,
    /// An image is not an item of the target graph.
    OutOfRange,
    SourcePreserved,
    TargetPreserved,
    NodeLabelPreserved,
    EdgeLabelPreserved,
    NotInjective,
    EndpointMismatch,
}

impl Clause {
    pub fn describe(self) -> &'static str {
        match self {
            Clause::SrcOutOfV => "src out of V",
            Clause::TgtOutOfV => "tgt out of V",
            Clause::NotTotal => "map not total on source",
            Clause::OutsideDomain => "map defined outside source",
            Clause::OutOfRange => "image outside target",
            Clause::SourcePreserved => "sources are preserved",
            Clause::TargetPreserved => "targets are preserved",
            Clause::NodeLabelPreserved => "node labels are preserved",
            Clause::EdgeLabelPreserved => "edge labels are preserved",
            Clause::NotInjective => "not injective",
            Clause::EndpointMismatch => "endpoint mismatch",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// One violated clause. `scope` names the component of a composite value
/// (for instance `"b"` inside a rule) and is empty at the top level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub scope: String,
    pub clause: Clause,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<ItemRef>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scope.is_empty() {
            write!(f, "{}: ", self.scope)?;
        }
        write!(f, "{}", self.clause)?;
        if let Some(item) = self.item {
            write!(f, " at {item}")?;
        }
        Ok(())
    }
}

/// Outcome of validating a graph, morphism or rule. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, clause: Clause, item: Option<ItemRef>) {
        self.violations.push(Violation {
            scope: String::new(),
            clause,
            item,
        });
    }

    /// Appends `other`'s violations under an extra scope prefix.
    pub(crate) fn absorb(&mut self, scope: &str, other: ValidationReport) {
        for mut v in other.violations {
            v.scope = if v.scope.is_empty() {
                scope.to_string()
            } else {
                format!("{scope}.{}", v.scope)
            };
            self.violations.push(v);
        }
    }

    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
