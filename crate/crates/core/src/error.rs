use thiserror::Error;

use crate::diagram::CheckReport;

/// Errors raised by engine operations.
///
/// Validation problems that are part of an operation's answer (a graph with a
/// dangling source, a square that is not a pushout) are reported as data, see
/// [`crate::ValidationReport`] and [`CheckReport`]. The variants here are for
/// calls whose inputs fall outside the operation's contract.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot compose morphisms: {0}")]
    Composition(String),

    /// The pushout check only decides all-injective squares.
    #[error("outside the injective pushout characterization: {0}")]
    Scope(String),

    #[error("dangling condition violated: {}", dangling_detail(.0))]
    Dangling(CheckReport),

    #[error("derivations are not independent: {0}")]
    Dependent(String),

    /// A property guaranteed by the theory failed on a concrete instance.
    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("malformed document: {0}")]
    Format(String),
}

fn dangling_detail(report: &CheckReport) -> String {
    let mut out = report.failed_clause.clone().unwrap_or_default();
    if let Some(items) = &report.counterexample {
        let items: Vec<String> = items.iter().map(ToString::to_string).collect();
        out.push_str(&format!(" [{}]", items.join(", ")));
    }
    out
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
