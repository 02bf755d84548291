use std::collections::BTreeSet;

use crate::kernel::{type_of, Fresh, KernelError, Name, Term, Type, HOLE_NAME};

/// `f t`, contracting on the spot when `f` is an abstraction whose
/// variable occurs at most once or `t` is atomic.
pub fn app_beta(f: Term, t: Term) -> Term {
    if let Term::Lam(x, _, body) = &f {
        let cheap = matches!(t, Term::Var(..) | Term::Const(_) | Term::Eps);
        if (cheap || body.count_occurrences(x) <= 1) && !body.occurs_free(HOLE_NAME) {
            return body.subst(x, &t);
        }
    }
    Term::app(f, t)
}

/// Left projection, contracting a literal pair.
pub fn fst_s(t: Term) -> Term {
    match t {
        Term::Pair(a, _) => (*a).clone(),
        t => Term::fst(t),
    }
}

pub fn snd_s(t: Term) -> Term {
    match t {
        Term::Pair(_, b) => (*b).clone(),
        t => Term::snd(t),
    }
}

/// Partial application `f (.) t` of an uncurried function: `f t` when the
/// domain of `f` is the type of `t`, and `lam x. f <t, x>` when it is a
/// product whose left factor is.
pub fn partial_apply(f: &Term, t: &Term, fresh: &mut Fresh) -> Result<Term, KernelError> {
    let fty = type_of(f)?;
    let tty = type_of(t)?;
    let Type::Arrow(dom, _) = &fty else {
        return Err(KernelError::TypeMismatch {
            location: "partial application".into(),
            expected: "a function".into(),
            found: fty.to_string(),
        });
    };
    if **dom == tty {
        return Ok(Term::app(f.clone(), t.clone()));
    }
    match &**dom {
        Type::Prod(l, r) if **l == tty => {
            let x = fresh.name("x");
            let xv = Term::var(x.clone(), (**r).clone());
            Ok(Term::lam(
                x,
                (**r).clone(),
                Term::app(f.clone(), Term::pair(t.clone(), xv)),
            ))
        }
        _ => Err(KernelError::TypeMismatch {
            location: "partial application".into(),
            expected: dom.to_string(),
            found: tty.to_string(),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Extended projection on a product-valued function: `lam x. (f x).side`.
pub fn proj_fun(f: &Term, side: Side, fresh: &mut Fresh) -> Result<Term, KernelError> {
    let fty = type_of(f)?;
    match &fty {
        Type::Arrow(dom, cod) if matches!(**cod, Type::Prod(..)) => {
            let x = fresh.name("x");
            let applied = app_beta(f.clone(), Term::var(x.clone(), (**dom).clone()));
            let body = match side {
                Side::Left => fst_s(applied),
                Side::Right => snd_s(applied),
            };
            Ok(Term::lam(x, (**dom).clone(), body))
        }
        _ => Err(KernelError::TypeMismatch {
            location: "extended projection".into(),
            expected: "a function into a product".into(),
            found: fty.to_string(),
        }),
    }
}

/// A term with exactly one occurrence of the hole variable. Binders of the
/// context may capture free variables of whatever fills the hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefContext {
    pub skeleton: Term,
}

impl DefContext {
    pub fn empty() -> Self {
        DefContext {
            skeleton: hole_var(),
        }
    }

    /// Wrap a skeleton; it must contain the hole exactly once.
    pub fn new(skeleton: Term) -> Self {
        debug_assert_eq!(skeleton.count_occurrences(HOLE_NAME), 1, "{skeleton}");
        DefContext { skeleton }
    }

    /// `lam y. <hole>`
    pub fn abstraction(y: impl Into<Name>, ty: Type) -> Self {
        DefContext::new(Term::lam(y, ty, hole_var()))
    }

    /// Names bound on the path from the root to the hole.
    pub fn binders_over_hole(&self) -> Vec<Name> {
        fn go(t: &Term, acc: &mut Vec<Name>) -> bool {
            match t {
                Term::Var(x, _) => &**x == HOLE_NAME,
                Term::Lam(x, _, b) => {
                    acc.push(x.clone());
                    if go(b, acc) {
                        return true;
                    }
                    acc.pop();
                    false
                }
                Term::App(a, b) | Term::Pair(a, b) => go(a, acc) || go(b, acc),
                Term::Fst(a) | Term::Snd(a) | Term::Check(a) => go(a, acc),
                Term::Const(_) | Term::Eps => false,
            }
        }
        let mut acc = Vec::new();
        go(&self.skeleton, &mut acc);
        acc
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut fv = self.skeleton.free_vars();
        fv.remove(HOLE_NAME);
        fv
    }
}

pub fn hole_var() -> Term {
    Term::hole(Type::Hole)
}

/// Fill the hole, instantiating the hole type with the type of `t` and
/// allowing capture.
pub fn plug(e: &DefContext, t: &Term) -> Result<Term, KernelError> {
    let ty = if t.occurs_free(HOLE_NAME) {
        Type::Hole
    } else {
        type_of(t)?
    };
    Ok(e.skeleton.fill_hole_type(&ty).subst_capturing(HOLE_NAME, t))
}

/// `compose(E1, E2){t} = E1{E2{t}}`
pub fn compose_contexts(outer: &DefContext, inner: &DefContext) -> DefContext {
    DefContext::new(outer.skeleton.subst_capturing(HOLE_NAME, &inner.skeleton))
}
