use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::{epsilon_simplify_type, Type};
use crate::logic::Formula;

/// Which type assignment: the quasi-linear one, or the one whose
/// implications carry marked counterexamples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interp {
    Plain,
    Marked,
}

/// Positive type before nulltype simplification.
pub fn tau_plus_raw(a: &Formula, v: Interp) -> Type {
    match a {
        Formula::Atom(_) => Type::Epsilon,
        Formula::Implies(a, b) => {
            let neg = match v {
                Interp::Plain => tau_minus_raw(a, v),
                Interp::Marked => tau_marked_raw(a, v),
            };
            Type::prod(tau_plus_raw(b, v), neg)
        }
        Formula::Forall(_, _, a) => tau_plus_raw(a, v),
    }
}

pub fn tau_minus_raw(a: &Formula, v: Interp) -> Type {
    match a {
        Formula::Atom(_) => Type::Epsilon,
        Formula::Implies(a, b) => Type::prod(tau_star_raw(a, v), tau_minus_raw(b, v)),
        Formula::Forall(_, ty, a) => Type::prod(ty.clone(), tau_minus_raw(a, v)),
    }
}

pub fn tau_star_raw(a: &Formula, v: Interp) -> Type {
    Type::arrow(tau_minus_raw(a, v), tau_plus_raw(a, v))
}

pub fn tau_marked_raw(a: &Formula, v: Interp) -> Type {
    Type::prod(Type::Mark, tau_minus_raw(a, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompTypes {
    pub plus: Type,
    pub minus: Type,
    pub star: Type,
    pub marked: Option<Type>,
    pub variant: Interp,
}

/// Computational types, simplified.
pub fn tau(a: &Formula, v: Interp) -> CompTypes {
    CompTypes {
        plus: epsilon_simplify_type(&tau_plus_raw(a, v)),
        minus: epsilon_simplify_type(&tau_minus_raw(a, v)),
        star: epsilon_simplify_type(&tau_star_raw(a, v)),
        marked: match v {
            Interp::Plain => None,
            Interp::Marked => Some(epsilon_simplify_type(&tau_marked_raw(a, v))),
        },
        variant: v,
    }
}

impl fmt::Display for CompTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tau+ = {} ; tau- = {} ; tau* = {}",
            self.plus, self.minus, self.star
        )?;
        if let Some(m) = &self.marked {
            write!(f, " ; tau_marked = {m}")?;
        }
        Ok(())
    }
}
