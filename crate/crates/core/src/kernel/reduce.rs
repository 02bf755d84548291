use std::sync::Arc;

use super::{Const, KernelError, Term};

pub const DEFAULT_FUEL: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
}

/// Contract the redex at the root of `t`, if there is one.
pub fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(x, _, body) = &**f {
                return Some(body.subst(x, a));
            }
            let (head, args) = t.spine();
            let Term::Const(c) = head else { return None };
            if args.len() != c.arity() {
                return None;
            }
            match c {
                Const::If(_) => match args[0] {
                    Term::Const(Const::Tt) => Some(args[1].clone()),
                    Term::Const(Const::Ff) => Some(args[2].clone()),
                    _ => None,
                },
                Const::Rec(s) => match args[0] {
                    Term::Const(Const::Zero) => Some(args[1].clone()),
                    Term::App(g, n) if matches!(**g, Term::Const(Const::Succ)) => {
                        let inner =
                            Term::rec(s.clone(), (**n).clone(), args[1].clone(), args[2].clone());
                        Some(Term::apps(args[2].clone(), [(**n).clone(), inner]))
                    }
                    _ => None,
                },
                Const::MarkCase(_) => match args[0] {
                    Term::Const(Const::MarkTt) => Some(args[1].clone()),
                    Term::Const(Const::MarkFf) => Some(args[2].clone()),
                    Term::Const(Const::MarkBot) => Some(args[3].clone()),
                    _ => None,
                },
                Const::MarkEq => match (args[0], args[1]) {
                    (Term::Const(a), Term::Const(b)) if is_mark(a) && is_mark(b) => {
                        Some(if a == b { Term::tt() } else { Term::ff() })
                    }
                    _ => None,
                },
                _ => None,
            }
        }
        Term::Fst(p) => match &**p {
            Term::Pair(a, _) => Some((**a).clone()),
            _ => None,
        },
        Term::Snd(p) => match &**p {
            Term::Pair(_, b) => Some((**b).clone()),
            _ => None,
        },
        Term::Check(inner) => Some((**inner).clone()),
        _ => None,
    }
}

fn is_mark(c: &Const) -> bool {
    matches!(c, Const::MarkTt | Const::MarkFf | Const::MarkBot)
}

/// One leftmost-outermost contraction, or `None` if `t` is normal.
pub fn reduce_step(t: &Term) -> Option<Term> {
    reduce_step_with(t, Strategy::LeftmostOutermost)
}

pub fn reduce_step_with(t: &Term, strategy: Strategy) -> Option<Term> {
    match strategy {
        Strategy::LeftmostOutermost => contract(t).or_else(|| step_children(t, strategy)),
        Strategy::RightmostInnermost => step_children(t, strategy).or_else(|| contract(t)),
    }
}

fn step_children(t: &Term, strategy: Strategy) -> Option<Term> {
    let rev = strategy == Strategy::RightmostInnermost;
    match t {
        Term::App(f, a) | Term::Pair(f, a) => {
            let rebuild = |f2: Arc<Term>, a2: Arc<Term>| match t {
                Term::App(..) => Term::App(f2, a2),
                _ => Term::Pair(f2, a2),
            };
            if rev {
                if let Some(a2) = reduce_step_with(a, strategy) {
                    return Some(rebuild(f.clone(), Arc::new(a2)));
                }
                reduce_step_with(f, strategy).map(|f2| rebuild(Arc::new(f2), a.clone()))
            } else {
                if let Some(f2) = reduce_step_with(f, strategy) {
                    return Some(rebuild(Arc::new(f2), a.clone()));
                }
                reduce_step_with(a, strategy).map(|a2| rebuild(f.clone(), Arc::new(a2)))
            }
        }
        Term::Lam(x, ty, b) => {
            reduce_step_with(b, strategy).map(|b2| Term::Lam(x.clone(), ty.clone(), Arc::new(b2)))
        }
        Term::Fst(a) => reduce_step_with(a, strategy).map(Term::fst),
        Term::Snd(a) => reduce_step_with(a, strategy).map(Term::snd),
        Term::Check(a) => reduce_step_with(a, strategy).map(Term::check),
        Term::Var(..) | Term::Const(_) | Term::Eps => None,
    }
}

pub fn normalize(t: &Term) -> Result<Term, KernelError> {
    normalize_with(t, Strategy::LeftmostOutermost, DEFAULT_FUEL)
}

/// Iterates single steps until a normal form. Exhausting `fuel` means the
/// reducer is broken, since every well-typed term is strongly normalizing.
pub fn normalize_with(t: &Term, strategy: Strategy, fuel: usize) -> Result<Term, KernelError> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match reduce_step_with(&cur, strategy) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(KernelError::FuelExhausted(fuel))
}

pub fn is_normal(t: &Term) -> bool {
    reduce_step(t).is_none()
}
