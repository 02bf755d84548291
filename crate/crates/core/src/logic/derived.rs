//! Ex-falso and stability, derived by recursion on the formula.

use super::formula::{Formula, Motive};
use super::proof::Proof;
use crate::kernel::{Fresh, Term, Type};

/// A closed proof of `F -> A`.
pub fn mk_efq(a: &Formula) -> Proof {
    efq(a, &mut Fresh::new())
}

/// A closed proof of `not not A -> A`.
pub fn mk_stability(a: &Formula) -> Proof {
    stability(a, &mut Fresh::new())
}

fn efq(a: &Formula, fresh: &mut Fresh) -> Proof {
    let u = fresh.name("efq");
    let hyp = Proof::assume(u.clone(), Formula::falsity());
    let body = match a {
        Formula::Atom(b) => {
            let c = fresh.name("c");
            let motive = Motive::new(
                c.clone(),
                Type::Bool,
                Formula::atom(Term::var(c, Type::Bool)),
            );
            Proof::cases(motive, b.clone(), Proof::Truth, hyp)
        }
        Formula::Implies(dom, cod) => {
            let v = fresh.name("v");
            Proof::imp_intro(v, (**dom).clone(), Proof::imp_elim(efq(cod, fresh), hyp))
        }
        Formula::Forall(x, ty, body) => Proof::all_intro(
            x.clone(),
            ty.clone(),
            Proof::imp_elim(efq(body, fresh), hyp),
        ),
    };
    Proof::imp_intro(u, Formula::falsity(), body)
}

fn stability(a: &Formula, fresh: &mut Fresh) -> Proof {
    let nn = Formula::not(Formula::not(a.clone()));
    let u = fresh.name("stab");
    let hyp = Proof::assume(u.clone(), nn.clone());
    let body = match a {
        Formula::Atom(b) => {
            let c = fresh.name("c");
            let at_c = Formula::atom(Term::var(c.clone(), Type::Bool));
            let motive = Motive::new(
                c,
                Type::Bool,
                Formula::implies(Formula::not(Formula::not(at_c.clone())), at_c),
            );
            let w = fresh.name("w");
            let on_tt = Proof::imp_intro(
                w.clone(),
                motive.instantiate(&Term::tt()).as_premise(),
                Proof::Truth,
            );
            let w2 = fresh.name("w");
            let v = fresh.name("v");
            let nn_ff = Formula::not(Formula::not(Formula::falsity()));
            let on_ff = Proof::imp_intro(
                w2.clone(),
                nn_ff.clone(),
                Proof::imp_elim(
                    Proof::assume(w2, nn_ff),
                    Proof::imp_intro(
                        v.clone(),
                        Formula::falsity(),
                        Proof::assume(v, Formula::falsity()),
                    ),
                ),
            );
            Proof::imp_elim(Proof::cases(motive, b.clone(), on_tt, on_ff), hyp)
        }
        Formula::Implies(dom, cod) => {
            // lam v. stab(B) (lam w. u (lam z. w (z v)))
            let v = fresh.name("v");
            let w = fresh.name("w");
            let z = fresh.name("z");
            let not_b = Formula::not((**cod).clone());
            let inner = Proof::imp_intro(
                z.clone(),
                a.clone(),
                Proof::imp_elim(
                    Proof::assume(w.clone(), not_b.clone()),
                    Proof::imp_elim(
                        Proof::assume(z, a.clone()),
                        Proof::assume(v.clone(), (**dom).clone()),
                    ),
                ),
            );
            let nn_b = Proof::imp_intro(w, not_b, Proof::imp_elim(hyp, inner));
            Proof::imp_intro(
                v,
                (**dom).clone(),
                Proof::imp_elim(stability(cod, fresh), nn_b),
            )
        }
        Formula::Forall(x, ty, body) => {
            // all x. stab(A) (lam w. u (lam z. w (z x)))
            let w = fresh.name("w");
            let z = fresh.name("z");
            let not_a = Formula::not((**body).clone());
            let inner = Proof::imp_intro(
                z.clone(),
                a.clone(),
                Proof::imp_elim(
                    Proof::assume(w.clone(), not_a.clone()),
                    Proof::all_elim(
                        Proof::assume(z, a.clone()),
                        Term::var(x.clone(), ty.clone()),
                    ),
                ),
            );
            let nn_a = Proof::imp_intro(w, not_a, Proof::imp_elim(hyp, inner));
            Proof::all_intro(
                x.clone(),
                ty.clone(),
                Proof::imp_elim(stability(body, fresh), nn_a),
            )
        }
    };
    Proof::imp_intro(u, nn, body)
}

impl Formula {
    /// The antecedent of an implication, or the formula itself.
    fn as_premise(&self) -> Formula {
        match self {
            Formula::Implies(a, _) => (**a).clone(),
            other => other.clone(),
        }
    }
}
