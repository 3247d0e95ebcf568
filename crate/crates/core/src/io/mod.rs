//! Text formats: the `.qdtmc` model format, embedded fixtures, result
//! documents and Graphviz export.

mod dot;
mod fixtures;
mod format;
mod results;

use std::fmt;

pub use dot::render_dot;
pub use fixtures::{fixture, fixture_description, fixture_source, FIXTURE_NAMES};
pub use format::{parse_model, parse_model_unvalidated, render_model};
pub use results::{sweep_csv, EngineKind, EvidenceRecord, ResultDocument, SweepRecord};

use crate::model::{ModelError, Violation};

/// One problem found while reading a model document.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    /// 1-based line number, when the problem belongs to a single line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}", join_lines(.0))]
    Syntax(Vec<Diagnostic>),
    #[error("{}", join_lines(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown fixture {0:?} (available: m1, m2, m3, m4, m5)")]
    UnknownFixture(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("malformed result document: {0}")]
    Json(#[from] serde_json::Error),
}

fn join_lines<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}
