use crate::rack::AxiomReport;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RackError {
    #[error("table must have at least one row")]
    EmptyTable,
    #[error("row {row} has {len} entries, expected {expected}")]
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry at row {row}, column {col} is {value}, outside 0..{n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("table is not a rack ({} violation(s))", .0.violations.len())]
    Axioms(AxiomReport),
    #[error("not a group: {0}")]
    NotAGroup(GroupViolation),
    #[error("group is not abelian: {a}·{b} ≠ {b}·{a}")]
    NotAbelian { a: usize, b: usize },
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("relabeling has length {got}, expected {expected}")]
    RelabelLength { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupViolation {
    NoIdentity,
    NoInverse { element: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

impl std::fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupViolation::NoIdentity => write!(f, "no identity element"),
            GroupViolation::NoInverse { element } => write!(f, "element {element} has no inverse"),
            GroupViolation::NotAssociative { a, b, c } => {
                write!(f, "({a}·{b})·{c} ≠ {a}·({b}·{c})")
            }
        }
    }
}

/// Errors from reading the `.rack` text format.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}, column {column}: {message}")]
    Entry {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Rack(#[from] RackError),
}
