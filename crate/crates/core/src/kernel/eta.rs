use std::collections::BTreeSet;

use super::{alpha_eq, is_normal, normalize, type_of, KernelError, Name, Term, Type};

/// Fully eta-expand a normal term of type `ty`: arrow-typed subterms
/// become lambdas and product-typed subterms become pairs.
pub fn eta_long(t: &Term, ty: &Type) -> Result<Term, KernelError> {
    let mut avoid = BTreeSet::new();
    t.all_names(&mut avoid);
    let mut counter = 0usize;
    expand(t, ty, &mut avoid, &mut counter)
}

fn fresh(avoid: &mut BTreeSet<Name>, counter: &mut usize) -> Name {
    loop {
        *counter += 1;
        let n = Name::from(format!("%eta{counter}"));
        if avoid.insert(n.clone()) {
            return n;
        }
    }
}

fn expand(
    t: &Term,
    ty: &Type,
    avoid: &mut BTreeSet<Name>,
    counter: &mut usize,
) -> Result<Term, KernelError> {
    match ty {
        Type::Arrow(dom, cod) => {
            if let Term::Lam(x, xty, body) = t {
                Ok(Term::lam(
                    x.clone(),
                    xty.clone(),
                    expand(body, cod, avoid, counter)?,
                ))
            } else {
                let z = fresh(avoid, counter);
                let applied = Term::app(t.clone(), Term::Var(z.clone(), (**dom).clone()));
                Ok(Term::lam(
                    z,
                    (**dom).clone(),
                    expand(&applied, cod, avoid, counter)?,
                ))
            }
        }
        Type::Prod(l, r) => {
            if let Term::Pair(a, b) = t {
                Ok(Term::pair(
                    expand(a, l, avoid, counter)?,
                    expand(b, r, avoid, counter)?,
                ))
            } else {
                Ok(Term::pair(
                    expand(&Term::fst(t.clone()), l, avoid, counter)?,
                    expand(&Term::snd(t.clone()), r, avoid, counter)?,
                ))
            }
        }
        _ => neutral(t, avoid, counter),
    }
}

fn neutral(t: &Term, avoid: &mut BTreeSet<Name>, counter: &mut usize) -> Result<Term, KernelError> {
    match t {
        Term::App(f, a) => {
            let ta = type_of(a)?;
            Ok(Term::app(
                neutral(f, avoid, counter)?,
                expand(a, &ta, avoid, counter)?,
            ))
        }
        Term::Fst(p) => Ok(Term::fst(neutral(p, avoid, counter)?)),
        Term::Snd(p) => Ok(Term::snd(neutral(p, avoid, counter)?)),
        Term::Check(p) => neutral(p, avoid, counter),
        _ => Ok(t.clone()),
    }
}

/// Equality of eta-long normal forms.
pub fn r_equal(s: &Term, t: &Term) -> Result<bool, KernelError> {
    let ts = type_of(s)?;
    let tt = type_of(t)?;
    if ts != tt {
        return Ok(false);
    }
    let ns = eta_normal_form(s, &ts)?;
    let nt = eta_normal_form(t, &tt)?;
    Ok(alpha_eq(&ns, &nt))
}

/// Normalize and eta-expand until stable. Expanding a partially applied
/// constant can expose a new redex, hence the loop.
pub fn eta_normal_form(t: &Term, ty: &Type) -> Result<Term, KernelError> {
    let mut cur = eta_long(&normalize(t)?, ty)?;
    for _ in 0..8 {
        if is_normal(&cur) {
            break;
        }
        cur = eta_long(&normalize(&cur)?, ty)?;
    }
    Ok(cur)
}
