//! Natural deduction for the negative fragment.

mod check;
mod derived;
mod formula;
mod proof;

pub use check::{annotated_context, check_proof, check_proof_open, freshen, LogicError};
pub use derived::{mk_efq, mk_stability};
pub use formula::{formula_eq, Formula, Motive};
pub use proof::{Assumptions, Proof};
