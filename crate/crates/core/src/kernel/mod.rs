//! The object language: Gödel's T with a marker base type.

mod epsilon;
mod eta;
mod reduce;
mod term;
mod types;
mod typing;

use std::sync::Arc;

use thiserror::Error;

pub use epsilon::{epsilon_simplify_term, epsilon_simplify_type};
pub use eta::{eta_long, eta_normal_form, r_equal};
pub use reduce::{
    contract, is_normal, normalize, normalize_with, reduce_step, reduce_step_with, Strategy,
    DEFAULT_FUEL,
};
pub use term::{
    alpha_eq, canonical_inhabitant, default_var_name, fresh_variant, Const, Term, HOLE_NAME,
};
pub use types::Type;
pub use typing::{infer_type, type_of, TypingContext};

pub type Name = Arc<str>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    TypeMismatch {
        location: String,
        expected: String,
        found: String,
    },
    #[error("variable `{0}` bound twice with different types")]
    DuplicateVariable(Name),
    #[error("normalization did not finish within {0} steps")]
    FuelExhausted(usize),
}

/// Sequential fresh names `{prefix}{n}`. One generator per extraction run
/// keeps output deterministic.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(&mut self, prefix: &str) -> Name {
        self.next += 1;
        Name::from(format!("%{prefix}{}", self.next))
    }
}
