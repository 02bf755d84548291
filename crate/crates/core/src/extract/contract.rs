//! Case-distinction operators combining two candidate counterexamples for
//! the same assumption.

use crate::interp::{characteristic_raw, t_or_apply, tau_marked_raw, tau_minus_raw, Interp};
use crate::kernel::{Fresh, Term, Type};
use crate::logic::Formula;

/// Which candidate a plain contraction inspects first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    /// Check the first operand; keep it only if it refutes. Yields the last
    /// counterexample in an induction.
    #[default]
    Last,
    /// Operands reversed; yields the first counterexample.
    First,
}

/// Operands of a contraction for assumption `u : C`. An absent operand
/// means `u` does not occur in the corresponding subproof.
#[derive(Clone, Debug)]
pub struct ContractSpec<'a> {
    pub formula: &'a Formula,
    /// The challenge parameter `x_u`.
    pub param: Term,
    pub t1: Option<Term>,
    pub t2: Option<Term>,
}

/// `Check(T_C x s)`, the tagged characteristic test.
pub fn check_term(c: &Formula, x: &Term, s: Term, v: Interp, fresh: &mut Fresh) -> Term {
    let tc = characteristic_raw(c, v, fresh);
    Term::check(Term::apps(tc, [x.clone(), s]))
}

fn shortcut(spec: &ContractSpec) -> Option<Term> {
    match (&spec.t1, &spec.t2) {
        (Some(t1), None) => Some(t1.clone()),
        (None, Some(t2)) => Some(t2.clone()),
        (None, None) => panic!("contraction without operands"),
        _ => None,
    }
}

/// A fresh let-bound variable: returns the variable and a wrapper that
/// binds it to `value` around a body.
fn bind(
    prefix: &str,
    ty: &Type,
    value: Term,
    fresh: &mut Fresh,
) -> (Term, impl FnOnce(Term) -> Term) {
    let x = fresh.name(prefix);
    let var = Term::var(x.clone(), ty.clone());
    let ty = ty.clone();
    (var, move |body| Term::let_in(x, ty, value, body))
}

/// `t1 if u not in FA(N); t2 if u not in FA(M); else if T_C x t1 then t2 else t1`
pub fn contract_plain(spec: ContractSpec, fresh: &mut Fresh) -> Term {
    if let Some(t) = shortcut(&spec) {
        return t;
    }
    let ty = tau_minus_raw(spec.formula, Interp::Plain);
    let (t1, t2) = (spec.t1.unwrap(), spec.t2.unwrap());
    let (a, wa) = bind("a", &ty, t1, fresh);
    let (b, wb) = bind("b", &ty, t2, fresh);
    let test = check_term(spec.formula, &spec.param, a.clone(), Interp::Plain, fresh);
    wa(wb(Term::ite(ty, test, b, a)))
}

/// The same with the operands of the test swapped.
pub fn contract_plain_reversed(spec: ContractSpec, fresh: &mut Fresh) -> Term {
    if let Some(t) = shortcut(&spec) {
        return t;
    }
    let ty = tau_minus_raw(spec.formula, Interp::Plain);
    let (t1, t2) = (spec.t1.unwrap(), spec.t2.unwrap());
    let (a, wa) = bind("a", &ty, t1, fresh);
    let (b, wb) = bind("b", &ty, t2, fresh);
    let test = check_term(spec.formula, &spec.param, b.clone(), Interp::Plain, fresh);
    wa(wb(Term::ite(ty, test, a, b)))
}

pub fn contract_oriented(spec: ContractSpec, o: Orientation, fresh: &mut Fresh) -> Term {
    match o {
        Orientation::Last => contract_plain(spec, fresh),
        Orientation::First => contract_plain_reversed(spec, fresh),
    }
}

fn is_mark(m: &Term, lit: Term) -> Term {
    Term::mark_eq(m.clone(), lit)
}

/// Marker-aware contraction on `s1♭m1`, `s2♭m2`:
/// `if T_or (m2=tt) (m1=ff) then t1
///  else if T_or (m1=tt) (T_or (m2=ff) (T_C x s1)) then t2
///  else s1♭ff`
pub fn contract_marked(spec: ContractSpec, fresh: &mut Fresh) -> Term {
    if let Some(t) = shortcut(&spec) {
        return t;
    }
    let c = spec.formula;
    let ty = tau_marked_raw(c, Interp::Marked);
    let (t1, t2) = (spec.t1.unwrap(), spec.t2.unwrap());
    let (a, wa) = bind("a", &ty, t1, fresh);
    let (b, wb) = bind("b", &ty, t2, fresh);
    let m1 = Term::fst(a.clone());
    let s1 = Term::snd(a.clone());
    let m2 = Term::fst(b.clone());
    let first = t_or_apply(is_mark(&m2, Term::mark_tt()), is_mark(&m1, Term::mark_ff()));
    let test = check_term(c, &spec.param, s1.clone(), Interp::Marked, fresh);
    let second = t_or_apply(
        is_mark(&m1, Term::mark_tt()),
        t_or_apply(is_mark(&m2, Term::mark_ff()), test),
    );
    wa(wb(Term::ite(
        ty.clone(),
        first,
        a,
        Term::ite(ty, second, b, Term::pair(Term::mark_ff(), s1)),
    )))
}

/// Flagged step `t1 ⋉^b t2` with `t1` the earlier candidate:
/// `if b then <t1,tt> else if |C| at t1 then <t2,ff> else <t1,tt>`.
pub fn checked_contract(b: Term, spec: ContractSpec, fresh: &mut Fresh) -> Term {
    let c = spec.formula;
    let ty = tau_minus_raw(c, Interp::Plain);
    let pty = Type::prod(ty.clone(), Type::Bool);
    let (t1, t2) = (
        spec.t1.expect("flagged contraction needs t1"),
        spec.t2.expect("flagged contraction needs t2"),
    );
    let (a, wa) = bind("a", &ty, t1, fresh);
    let test = check_term(c, &spec.param, a.clone(), Interp::Plain, fresh);
    let keep = Term::pair(a, Term::tt());
    wa(Term::ite(
        pty.clone(),
        b,
        keep.clone(),
        Term::ite(pty, test, Term::pair(t2, Term::ff()), keep),
    ))
}

/// Flagged step on marked candidates. A confirmed earlier candidate stops
/// the search; an arbitrary one is replaced without a check.
pub fn checked_contract_marked(b: Term, spec: ContractSpec, fresh: &mut Fresh) -> Term {
    let c = spec.formula;
    let ty = tau_marked_raw(c, Interp::Marked);
    let pty = Type::prod(ty.clone(), Type::Bool);
    let (t1, t2) = (
        spec.t1.expect("flagged contraction needs t1"),
        spec.t2.expect("flagged contraction needs t2"),
    );
    let (a, wa) = bind("a", &ty, t1, fresh);
    let m1 = Term::fst(a.clone());
    let s1 = Term::snd(a.clone());
    let test = check_term(c, &spec.param, s1.clone(), Interp::Marked, fresh);
    let keep = Term::pair(a, Term::tt());
    let take_new = t_or_apply(is_mark(&m1, Term::mark_tt()), test);
    wa(Term::ite(
        pty.clone(),
        b,
        keep.clone(),
        Term::ite(
            pty.clone(),
            is_mark(&m1, Term::mark_ff()),
            keep,
            Term::ite(
                pty,
                take_new,
                Term::pair(t2, Term::ff()),
                Term::pair(Term::pair(Term::mark_ff(), s1), Term::tt()),
            ),
        ),
    ))
}
