//! Textual front end: the `.dash` concrete syntax and the canonical JSON
//! interchange document.
//!
//! `parse_model`/`serialize_model` handle the operator-facing DSL;
//! `load_canonical`/`dump_canonical` handle the machine-facing interchange
//! format. All four are pure functions over immutable data.

mod canonical;
mod lexer;
mod parser;
mod printer;

pub use canonical::{dump_canonical, load_canonical, SchemaError, FORMAT_VERSION};
pub use parser::parse_model;
pub use printer::serialize_model;

/// 1-based position in DSL source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceLocation {
    pub line: u32,
    pub column: u32,
}

impl std::fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// First syntax error found in a DSL document (parsing is fail-fast).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: expected {expected}, found {found}")]
pub struct ParseError {
    pub location: SourceLocation,
    pub expected: String,
    pub found: String,
}
