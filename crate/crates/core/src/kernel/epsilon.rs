//! Nulltype simplification.
//!
//! Types: `r * eps ~> r`, `eps * r ~> r`, `r => eps ~> eps`, `eps => r ~> r`.
//! Terms: `t.fst ~> t` when the right component is `eps` (and symmetrically),
//! `<t, eps> ~> t`, `<eps, t> ~> t`, `lam x. eps ~> eps`, `lam x^eps. t ~> t`,
//! `eps t ~> eps`, `t eps ~> t`.
//!
//! Term simplification is type directed: it needs the unsimplified type of
//! every subterm, so it works on terms whose annotations still mention `eps`.

use std::sync::Arc;

use super::{Const, KernelError, Term, Type};

pub fn epsilon_simplify_type(ty: &Type) -> Type {
    match ty {
        Type::Prod(a, b) => {
            let (a, b) = (epsilon_simplify_type(a), epsilon_simplify_type(b));
            match (a.is_epsilon(), b.is_epsilon()) {
                (_, true) => a,
                (true, false) => b,
                _ => Type::prod(a, b),
            }
        }
        Type::Arrow(a, b) => {
            let (a, b) = (epsilon_simplify_type(a), epsilon_simplify_type(b));
            if b.is_epsilon() {
                Type::Epsilon
            } else if a.is_epsilon() {
                b
            } else {
                Type::arrow(a, b)
            }
        }
        other => other.clone(),
    }
}

/// Erase all nulltype content. The result mentions `eps` only if the whole
/// term has nulltype, in which case it is `Term::Eps`.
pub fn epsilon_simplify_term(t: &Term) -> Result<Term, KernelError> {
    Ok(erase(t, &mut Vec::new())?.0)
}

/// Returns the simplified term together with the unsimplified type of `t`.
fn erase(t: &Term, bound: &mut Vec<(Arc<str>, Type)>) -> Result<(Term, Type), KernelError> {
    let raw = match t {
        Term::Var(x, ann) => {
            let ty = bound
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, ty)| ty.clone())
                .unwrap_or_else(|| ann.clone());
            let simple = epsilon_simplify_type(&ty);
            if simple.is_epsilon() {
                return Ok((Term::Eps, ty));
            }
            return Ok((Term::Var(x.clone(), simple), ty));
        }
        Term::Lam(x, dom, body) => {
            bound.push((x.clone(), dom.clone()));
            let r = erase(body, bound);
            bound.pop();
            let (b, cod) = r?;
            let ty = Type::arrow(dom.clone(), cod);
            let term = if epsilon_simplify_type(&ty).is_epsilon() {
                Term::Eps
            } else {
                let sdom = epsilon_simplify_type(dom);
                if sdom.is_epsilon() {
                    b
                } else {
                    Term::lam(x.clone(), sdom, b)
                }
            };
            return Ok((term, ty));
        }
        Term::App(f, a) => {
            let (ef, tf) = erase(f, bound)?;
            let (ea, ta) = erase(a, bound)?;
            let ty = match &tf {
                Type::Arrow(dom, cod) if **dom == ta => (**cod).clone(),
                _ => {
                    return Err(KernelError::TypeMismatch {
                        location: format!("application {t}"),
                        expected: format!("{ta} => _"),
                        found: tf.to_string(),
                    })
                }
            };
            if epsilon_simplify_type(&ty).is_epsilon() {
                return Ok((Term::Eps, ty));
            }
            let term = if epsilon_simplify_type(&ta).is_epsilon() {
                ef
            } else {
                Term::app(ef, ea)
            };
            return Ok((term, ty));
        }
        Term::Pair(a, b) => {
            let (ea, ta) = erase(a, bound)?;
            let (eb, tb) = erase(b, bound)?;
            let term = match (ea, eb) {
                (Term::Eps, eb) => eb,
                (ea, Term::Eps) => ea,
                (ea, eb) => Term::pair(ea, eb),
            };
            return Ok((term, Type::prod(ta, tb)));
        }
        Term::Fst(p) | Term::Snd(p) => {
            let (ep, tp) = erase(p, bound)?;
            let Type::Prod(l, r) = &tp else {
                return Err(KernelError::TypeMismatch {
                    location: format!("projection {t}"),
                    expected: "product type".into(),
                    found: tp.to_string(),
                });
            };
            let left = matches!(t, Term::Fst(_));
            let (mine, other) = if left { (l, r) } else { (r, l) };
            let ty = (**mine).clone();
            if epsilon_simplify_type(mine).is_epsilon() {
                return Ok((Term::Eps, ty));
            }
            let term = if epsilon_simplify_type(other).is_epsilon() {
                ep
            } else if left {
                Term::fst(ep)
            } else {
                Term::snd(ep)
            };
            return Ok((term, ty));
        }
        Term::Check(inner) => {
            let (e, ty) = erase(inner, bound)?;
            let term = if matches!(e, Term::Eps) {
                e
            } else {
                Term::check(e)
            };
            return Ok((term, ty));
        }
        Term::Eps => return Ok((Term::Eps, Type::Epsilon)),
        Term::Const(c) => c,
    };
    let ty = raw.ty();
    if epsilon_simplify_type(&ty).is_epsilon() {
        return Ok((Term::Eps, ty));
    }
    let simple = match raw {
        Const::If(s) => Const::If(epsilon_simplify_type(s)),
        Const::Rec(s) => Const::Rec(epsilon_simplify_type(s)),
        Const::MarkCase(s) => Const::MarkCase(epsilon_simplify_type(s)),
        other => other.clone(),
    };
    Ok((Term::Const(simple), ty))
}
