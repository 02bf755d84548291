use std::collections::{BTreeMap, BTreeSet};

use super::contract::{contract_marked, contract_oriented, ContractSpec, Orientation};
use super::{param_name, ExtractConfig, ExtractError, ExtractionResult, Variant};
use crate::interp::{
    fst_s, hole_var, plug, snd_s, tau_marked_raw, tau_minus_raw, tau_plus_raw, tau_star_raw,
    DefContext, Interp,
};
use crate::kernel::{canonical_inhabitant, Fresh, Name, Term, Type, HOLE_NAME};
use crate::logic::{check_proof_open, freshen, Formula, Proof};

/// Extracted content of one subproof.
#[derive(Clone, Debug)]
pub(super) struct Ex {
    pub ctx: DefContext,
    pub y: Name,
    pub yty: Type,
    pub plus: Term,
    pub minus: BTreeMap<Name, Term>,
    pub concl: Formula,
}

impl Ex {
    pub fn index_of(&self, u: &str) -> Option<usize> {
        self.minus.keys().position(|k| &**k == u)
    }
}

pub(super) struct Extractor {
    pub cfg: ExtractConfig,
    pub fresh: Fresh,
    pub formulas: BTreeMap<Name, Formula>,
    pub fallbacks: usize,
}

pub fn extract(p: &Proof, cfg: ExtractConfig) -> Result<ExtractionResult, ExtractError> {
    check_proof_open(p)?;
    let p = freshen(p);
    let mut formulas = BTreeMap::new();
    collect_assumptions(&p, &mut formulas);
    let mut ex = Extractor {
        cfg,
        fresh: Fresh::new(),
        formulas,
        fallbacks: 0,
    };
    let out = ex.ex(&p)?;
    let open = p.fa();
    let assumptions = open
        .into_iter()
        .map(|(u, c)| {
            let x = ex.param(&u);
            (u, (c, x))
        })
        .collect();
    Ok(ExtractionResult {
        conclusion: out.concl,
        config: cfg,
        context: out.ctx,
        dplus: out.plus,
        dminus: out.minus,
        challenge: out.y,
        challenge_ty: out.yty,
        assumptions,
        fallbacks: ex.fallbacks,
        proof: p,
    })
}

fn collect_assumptions(p: &Proof, out: &mut BTreeMap<Name, Formula>) {
    match p {
        Proof::Assume(u, a) | Proof::ImpIntro(u, a, _) => {
            out.entry(u.clone()).or_insert_with(|| a.clone());
            if let Proof::ImpIntro(_, _, m) = p {
                collect_assumptions(m, out);
            }
        }
        Proof::ImpElim(m, n) => {
            collect_assumptions(m, out);
            collect_assumptions(n, out);
        }
        Proof::AllIntro(_, _, m) | Proof::AllElim(m, _) => collect_assumptions(m, out),
        Proof::Truth => {}
        Proof::Cases { on_tt, on_ff, .. } => {
            collect_assumptions(on_tt, out);
            collect_assumptions(on_ff, out);
        }
        Proof::Ind {
            motive,
            base,
            var,
            hyp,
            step,
            ..
        } => {
            out.entry(hyp.clone())
                .or_insert_with(|| motive.instantiate(&Term::var(var.clone(), Type::Nat)));
            collect_assumptions(base, out);
            collect_assumptions(step, out);
        }
    }
}

/// `<a_0, <a_1, ... <a_k, eps>>>`
pub(super) fn tuple(items: impl DoubleEndedIterator<Item = Term>) -> Term {
    items.rev().fold(Term::Eps, |acc, t| Term::pair(t, acc))
}

pub(super) fn tuple_ty(items: impl DoubleEndedIterator<Item = Type>) -> Type {
    items.rev().fold(Type::Epsilon, |acc, t| Type::prod(t, acc))
}

/// Component `i` of a tuple built by [`tuple`].
pub(super) fn nth(t: Term, i: usize) -> Term {
    let mut t = t;
    for _ in 0..i {
        t = snd_s(t);
    }
    fst_s(t)
}

/// Component `i` of the negative part of a bundle `<d+, <d-_0, ...>>`.
pub(super) fn sel(t: Term, i: usize) -> Term {
    nth(snd_s(t), i)
}

impl Extractor {
    pub fn interp(&self) -> Interp {
        self.cfg.variant.interp()
    }

    pub fn formula_of(&self, u: &str) -> &Formula {
        self.formulas
            .get(u)
            .unwrap_or_else(|| panic!("unknown assumption {u}"))
    }

    pub fn param(&self, u: &str) -> Term {
        let c = self.formula_of(u);
        Term::var(param_name(u), tau_star_raw(c, self.interp()))
    }

    pub fn minus_ty(&self, a: &Formula) -> Type {
        tau_minus_raw(a, self.interp())
    }

    pub fn plus_ty(&self, a: &Formula) -> Type {
        tau_plus_raw(a, self.interp())
    }

    /// Type of a negative witness for an assumption.
    pub fn neg_ty(&self, c: &Formula) -> Type {
        match self.cfg.variant {
            Variant::QuasiLinear => tau_minus_raw(c, Interp::Plain),
            Variant::Marked => tau_marked_raw(c, Interp::Marked),
        }
    }

    pub fn neg_ty_of(&self, u: &str) -> Type {
        self.neg_ty(self.formula_of(u))
    }

    /// A counterexample carrying no information.
    pub fn canon_neg(&self, c: &Formula) -> Term {
        let s = canonical_inhabitant(&self.minus_ty(c));
        match self.cfg.variant {
            Variant::QuasiLinear => s,
            Variant::Marked => Term::pair(Term::mark_tt(), s),
        }
    }

    pub fn canon_neg_of(&self, u: &str) -> Term {
        self.canon_neg(self.formula_of(u))
    }

    /// The challenge inside a negative witness.
    pub fn value_part(&self, t: Term) -> Term {
        match self.cfg.variant {
            Variant::QuasiLinear => t,
            Variant::Marked => snd_s(t),
        }
    }

    pub fn contract(&mut self, u: &str, t1: Option<Term>, t2: Option<Term>) -> Term {
        let c = self.formula_of(u).clone();
        let spec = ContractSpec {
            formula: &c,
            param: self.param(u),
            t1,
            t2,
        };
        match self.cfg.variant {
            Variant::QuasiLinear => contract_oriented(spec, self.cfg.orientation, &mut self.fresh),
            Variant::Marked => {
                let spec = match self.cfg.orientation {
                    Orientation::Last => spec,
                    Orientation::First => ContractSpec {
                        t1: spec.t2,
                        t2: spec.t1,
                        ..spec
                    },
                };
                contract_marked(spec, &mut self.fresh)
            }
        }
    }

    pub fn bundle_ty(&self, e: &Ex) -> Type {
        let plus = self.plus_ty(&e.concl);
        Type::prod(
            plus,
            tuple_ty(
                e.minus
                    .keys()
                    .map(|u| self.neg_ty_of(u))
                    .collect::<Vec<_>>()
                    .into_iter(),
            ),
        )
    }

    /// `[[M]] : tau-(A) => bundle`
    pub fn full(&self, e: &Ex) -> Result<Term, ExtractError> {
        let bundle = Term::pair(
            e.plus.clone(),
            tuple(e.minus.values().cloned().collect::<Vec<_>>().into_iter()),
        );
        Ok(plug(&e.ctx, &bundle)?)
    }

    fn fresh_y(&mut self, a: &Formula) -> (Name, Type, Term) {
        let y = self.fresh.name("y");
        let ty = self.minus_ty(a);
        let var = Term::var(y.clone(), ty.clone());
        (y, ty, var)
    }

    pub fn ex(&mut self, p: &Proof) -> Result<Ex, ExtractError> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.ex_inner(p))
    }

    fn ex_inner(&mut self, p: &Proof) -> Result<Ex, ExtractError> {
        match p {
            Proof::Assume(u, a) => {
                let (y, yty, yv) = self.fresh_y(a);
                let neg = match self.cfg.variant {
                    Variant::QuasiLinear => yv.clone(),
                    Variant::Marked => Term::pair(Term::mark_bot(), yv.clone()),
                };
                Ok(Ex {
                    ctx: DefContext::abstraction(y.clone(), yty.clone()),
                    y,
                    yty,
                    plus: Term::app(self.param(u), yv),
                    minus: BTreeMap::from([(u.clone(), neg)]),
                    concl: a.clone(),
                })
            }
            Proof::Truth => {
                let concl = Formula::truth();
                let (y, yty, _) = self.fresh_y(&concl);
                Ok(Ex {
                    ctx: DefContext::abstraction(y.clone(), yty.clone()),
                    y,
                    yty,
                    plus: Term::Eps,
                    minus: BTreeMap::new(),
                    concl,
                })
            }
            Proof::ImpIntro(u, b, m) => {
                let em = self.ex(m)?;
                let concl = Formula::implies(b.clone(), em.concl.clone());
                let (y, yty, yv) = self.fresh_y(&concl);
                let xu = self.param(u);
                let Term::Var(xname, xty) = &xu else {
                    unreachable!()
                };
                let inner = Term::app(em.ctx.skeleton.clone(), Term::snd(yv.clone()));
                let skel = Term::lam(
                    y.clone(),
                    yty.clone(),
                    Term::let_in(xname.clone(), xty.clone(), Term::fst(yv), inner),
                );
                let mut minus = em.minus;
                let du = minus.remove(u).unwrap_or_else(|| self.canon_neg(b));
                Ok(Ex {
                    ctx: DefContext::new(skel),
                    y,
                    yty,
                    plus: Term::pair(em.plus, du),
                    minus,
                    concl,
                })
            }
            Proof::AllIntro(x, ty, m) => {
                let em = self.ex(m)?;
                let concl = Formula::forall(x.clone(), ty.clone(), em.concl.clone());
                let (y, yty, yv) = self.fresh_y(&concl);
                let inner = Term::app(em.ctx.skeleton.clone(), Term::snd(yv.clone()));
                let skel = Term::lam(
                    y.clone(),
                    yty.clone(),
                    Term::let_in(x.clone(), ty.clone(), Term::fst(yv), inner),
                );
                Ok(Ex {
                    ctx: DefContext::new(skel),
                    y,
                    yty,
                    plus: em.plus,
                    minus: em.minus,
                    concl,
                })
            }
            Proof::AllElim(m, t) => {
                let em = self.ex(m)?;
                let Formula::Forall(x, _, body) = &em.concl else {
                    unreachable!("checked proof")
                };
                let concl = body.subst(x, t);
                let (y, yty, yv) = self.fresh_y(&concl);
                let inner = Term::app(em.ctx.skeleton.clone(), Term::pair(t.clone(), yv));
                Ok(Ex {
                    ctx: DefContext::new(Term::lam(y.clone(), yty.clone(), inner)),
                    y,
                    yty,
                    plus: em.plus,
                    minus: em.minus,
                    concl,
                })
            }
            Proof::ImpElim(m, n) => self.imp_elim(m, n),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                let em = self.ex(on_tt)?;
                let en = self.ex(on_ff)?;
                let concl = motive.instantiate(scrutinee);
                let (y, yty, yv) = self.fresh_y(&concl);
                let inner = Term::app(en.ctx.skeleton.clone(), yv.clone());
                let skel = Term::app(em.ctx.skeleton.subst_capturing(HOLE_NAME, &inner), yv);
                let plus_ty = self.plus_ty(&concl);
                let plus = Term::ite(plus_ty, scrutinee.clone(), em.plus, en.plus);
                let ids: BTreeSet<Name> = em.minus.keys().chain(en.minus.keys()).cloned().collect();
                let mut minus = BTreeMap::new();
                for u in ids {
                    let a = em
                        .minus
                        .get(&u)
                        .cloned()
                        .unwrap_or_else(|| self.canon_neg_of(&u));
                    let b = en
                        .minus
                        .get(&u)
                        .cloned()
                        .unwrap_or_else(|| self.canon_neg_of(&u));
                    minus.insert(
                        u.clone(),
                        Term::ite(self.neg_ty_of(&u), scrutinee.clone(), a, b),
                    );
                }
                Ok(Ex {
                    ctx: DefContext::new(Term::lam(y.clone(), yty.clone(), skel)),
                    y,
                    yty,
                    plus,
                    minus,
                    concl,
                })
            }
            Proof::Ind { .. } => self.induction(p),
        }
    }

    fn imp_elim(&mut self, m: &Proof, n: &Proof) -> Result<Ex, ExtractError> {
        let em = self.ex(m)?;
        let en = self.ex(n)?;
        let Formula::Implies(_, a) = &em.concl else {
            unreachable!("checked proof")
        };
        let concl = (**a).clone();
        let (y, yty, yv) = self.fresh_y(&concl);

        let nb = self.fresh.name("nb");
        let nb_ty = Type::arrow(en.yty.clone(), self.bundle_ty(&en));
        let nbv = Term::var(nb.clone(), nb_ty.clone());
        let full_n = self.full(&en)?;

        let yb = self.fresh.name("y");
        let ybv = Term::var(yb.clone(), en.yty.clone());
        let nstar = Term::lam(yb, en.yty.clone(), Term::fst(Term::app(nbv.clone(), ybv)));
        let z = Term::pair(nstar, yv);

        let w = self.fresh.name("w");
        let w_ty = self.plus_ty(&em.concl);
        let wv = Term::var(w.clone(), w_ty.clone());
        let r = self.fresh.name("r");
        let r_ty = self.bundle_ty(&en);
        let rv = Term::var(r.clone(), r_ty.clone());
        let challenge = self.value_part(Term::snd(wv.clone()));
        let inner = Term::let_in(
            w,
            w_ty,
            em.plus.clone(),
            Term::let_in(r, r_ty, Term::app(nbv, challenge), hole_var()),
        );
        let body = Term::app(em.ctx.skeleton.subst_capturing(HOLE_NAME, &inner), z);
        let skel = Term::lam(
            y.clone(),
            yty.clone(),
            Term::let_in(nb, nb_ty, full_n, body),
        );

        let ids: BTreeSet<Name> = em.minus.keys().chain(en.minus.keys()).cloned().collect();
        let mut minus = BTreeMap::new();
        for u in ids {
            let t1 = em.minus.get(&u).cloned();
            let t2 = en.index_of(&u).map(|i| sel(rv.clone(), i));
            let t = self.contract(&u, t1, t2);
            minus.insert(u, t);
        }
        Ok(Ex {
            ctx: DefContext::new(skel),
            y,
            yty,
            plus: Term::fst(wv),
            minus,
            concl,
        })
    }
}
