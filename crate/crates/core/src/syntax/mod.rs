//! Concrete s-expression syntax for types, terms, formulas and proofs.

mod parse;
mod print;
mod sexp;

use thiserror::Error;

pub use parse::{
    parse_document, parse_formula, parse_proof, parse_term, parse_type, Document, Item,
};
pub use print::print_proof;
pub use sexp::{read_all, Pos, Sexp};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}")]
    Expected {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("{line}:{col}: `{name}` is declared twice")]
    DuplicateBinder {
        name: String,
        line: usize,
        col: usize,
    },
}

impl ParseError {
    pub fn at(pos: Pos, expected: &str) -> Self {
        ParseError::Expected {
            line: pos.line,
            col: pos.col,
            expected: expected.to_string(),
        }
    }

    pub fn duplicate(name: &str, pos: Pos) -> Self {
        ParseError::DuplicateBinder {
            name: name.to_string(),
            line: pos.line,
            col: pos.col,
        }
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Expected { line, col, .. }
            | ParseError::DuplicateBinder { line, col, .. } => (*line, *col),
        }
    }
}

#[cfg(test)]
mod tests;
