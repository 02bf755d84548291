use super::context::{app_beta, fst_s, snd_s};
use super::types::{tau_minus_raw, tau_star_raw, Interp};
use crate::kernel::{epsilon_simplify_term, type_of, Fresh, KernelError, Name, Term, Type};
use crate::logic::Formula;

/// `|A|^r_s` on unsimplified terms: `r : tau*(A)`, `s : tau-(A)` with
/// nulltype components still present.
pub fn translate_raw(a: &Formula, r: &Term, s: &Term, v: Interp, fresh: &mut Fresh) -> Formula {
    match a {
        Formula::Atom(_) => a.clone(),
        Formula::Forall(x, _, body) => {
            let inst = body.subst(x, &fst_s(s.clone()));
            let r2 = partial(r, &fst_s(s.clone()), &tau_minus_raw(body, v), fresh);
            translate_raw(&inst, &r2, &snd_s(s.clone()), v, fresh)
        }
        Formula::Implies(prem, concl) => {
            let arg = fst_s(s.clone());
            // challenge handed back to the premise
            let back = snd_s(app_beta(r.clone(), s.clone()));
            let back = match v {
                Interp::Plain => back,
                Interp::Marked => snd_s(back),
            };
            let left = translate_raw(prem, &arg, &back, v, fresh);
            let rb = partial(r, &arg, &tau_minus_raw(concl, v), fresh);
            let z = fresh.name("z");
            let zty = tau_minus_raw(concl, v);
            let rb_l = Term::lam(
                z.clone(),
                zty.clone(),
                fst_s(app_beta(rb, Term::var(z, zty))),
            );
            let right = translate_raw(concl, &rb_l, &snd_s(s.clone()), v, fresh);
            Formula::implies(left, right)
        }
    }
}

/// `lam x. r <t, x>` where `x : rest`.
fn partial(r: &Term, t: &Term, rest: &Type, fresh: &mut Fresh) -> Term {
    let x = fresh.name("x");
    let xv = Term::var(x.clone(), rest.clone());
    Term::lam(
        x,
        rest.clone(),
        app_beta(r.clone(), Term::pair(t.clone(), xv)),
    )
}

/// Turn a quantifier-free formula into a boolean term with
/// `if p then q else tt` for implication.
pub fn formula_to_bool(a: &Formula) -> Term {
    match a {
        Formula::Atom(t) => t.clone(),
        Formula::Implies(p, q) => impb(formula_to_bool(p), formula_to_bool(q)),
        Formula::Forall(..) => panic!("formula_to_bool on a quantified formula"),
    }
}

pub fn impb(p: Term, q: Term) -> Term {
    Term::ite(Type::Bool, p, q, Term::tt())
}

/// `T_or := lam x,y. if x then tt else y`
pub fn t_or() -> Term {
    let x = Term::var("x", Type::Bool);
    let y = Term::var("y", Type::Bool);
    Term::lam(
        "x",
        Type::Bool,
        Term::lam("y", Type::Bool, t_or_apply(x, y)),
    )
}

/// `T_or a b`, already contracted.
pub fn t_or_apply(a: Term, b: Term) -> Term {
    Term::ite(Type::Bool, a, Term::tt(), b)
}

/// `T_C` before nulltype simplification:
/// `lam x : tau*(C). lam y : tau-(C). |C|^x_y` as a boolean term.
pub fn characteristic_raw(c: &Formula, v: Interp, fresh: &mut Fresh) -> Term {
    let x = fresh.name("tx");
    let y = fresh.name("ty");
    let xty = tau_star_raw(c, v);
    let yty = tau_minus_raw(c, v);
    let body = formula_to_bool(&translate_raw(
        c,
        &Term::var(x.clone(), xty.clone()),
        &Term::var(y.clone(), yty.clone()),
        v,
        fresh,
    ));
    Term::lam(x, xty, Term::lam(y, yty, body))
}

/// The simplified characteristic term of `C`.
pub fn characteristic_term(c: &Formula, v: Interp) -> Result<Term, KernelError> {
    epsilon_simplify_term(&characteristic_raw(c, v, &mut Fresh::new()))
}

/// `|A|^r_s` for simplified `r` and `s`.
pub fn translate(a: &Formula, r: &Term, s: &Term, v: Interp) -> Result<Formula, KernelError> {
    let mut fresh = Fresh::new();
    let rn = fresh.name("r");
    let sn = fresh.name("s");
    let rty = tau_star_raw(a, v);
    let sty = tau_minus_raw(a, v);
    check_against(r, &rty)?;
    check_against(s, &sty)?;
    let raw = translate_raw(
        a,
        &Term::var(rn.clone(), rty),
        &Term::var(sn.clone(), sty),
        v,
        &mut fresh,
    );
    erase_formula(&raw, &[(rn, r.clone()), (sn, s.clone())])
}

fn check_against(t: &Term, raw: &Type) -> Result<(), KernelError> {
    let want = crate::kernel::epsilon_simplify_type(raw);
    let got = type_of(t)?;
    if got != want {
        return Err(KernelError::TypeMismatch {
            location: "translation".into(),
            expected: want.to_string(),
            found: got.to_string(),
        });
    }
    Ok(())
}

/// Simplify every atom and then substitute simplified terms for the
/// placeholder variables.
fn erase_formula(a: &Formula, sub: &[(Name, Term)]) -> Result<Formula, KernelError> {
    Ok(match a {
        Formula::Atom(t) => {
            let mut e = epsilon_simplify_term(t)?;
            for (x, s) in sub {
                e = e.subst(x, s);
            }
            Formula::Atom(e)
        }
        Formula::Implies(p, q) => Formula::implies(erase_formula(p, sub)?, erase_formula(q, sub)?),
        Formula::Forall(x, ty, b) => Formula::forall(x.clone(), ty.clone(), erase_formula(b, sub)?),
    })
}
