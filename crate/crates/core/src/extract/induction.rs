//! Extraction for induction over nat: the general bundle recursion and the
//! three recursion shapes for conclusions without negative content.

use std::collections::{BTreeMap, BTreeSet};

use super::contract::{checked_contract, checked_contract_marked, ContractSpec};
use super::engine::{sel, tuple, tuple_ty, Ex, Extractor};
use super::{ExtractError, InductionMode, Variant};
use crate::interp::{hole_var, DefContext};
use crate::kernel::{canonical_inhabitant, epsilon_simplify_type, Name, Term, Type};
use crate::logic::{Formula, Proof};

/// Shared pieces of an induction node.
struct Parts {
    em: Ex,
    en: Ex,
    concl: Formula,
    motive_at: Formula,
    target: Term,
    hyp: Name,
    /// Open assumptions of the whole node, in bundle order.
    ids: Vec<Name>,
    /// `lam y. let mb := [[M]] in let nbf := lam k x_u. [[N]] in <rest>`
    y: Name,
    yty: Type,
    mb: Term,
    nbf: Term,
}

impl Extractor {
    pub(super) fn induction(&mut self, p: &Proof) -> Result<Ex, ExtractError> {
        let Proof::Ind {
            motive,
            target,
            base,
            var,
            hyp,
            step,
        } = p
        else {
            unreachable!()
        };
        let em = self.ex(base)?;
        let en = self.ex(step)?;
        let concl = motive.instantiate(target);
        let motive_at = motive.instantiate(&Term::var(var.clone(), Type::Nat));
        let ids: Vec<Name> = em
            .minus
            .keys()
            .chain(en.minus.keys())
            .filter(|u| *u != hyp)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let y = self.fresh.name("y");
        let yty = self.minus_ty(&concl);

        let mb = self.fresh.name("mb");
        let mb_ty = Type::arrow(em.yty.clone(), self.bundle_ty(&em));
        let nbf = self.fresh.name("nbf");
        let star = self.star_ty(&motive_at);
        let nb_ty = Type::arrow(en.yty.clone(), self.bundle_ty(&en));
        let nbf_ty = Type::arrows([Type::Nat, star.clone()], nb_ty);
        let xu = self.param(hyp);
        let Term::Var(xname, _) = &xu else {
            unreachable!()
        };
        let nbf_val = Term::lam(
            var.clone(),
            Type::Nat,
            Term::lam(xname.clone(), star, self.full(&en)?),
        );
        let full_m = self.full(&em)?;
        let parts = Parts {
            mb: Term::var(mb.clone(), mb_ty.clone()),
            nbf: Term::var(nbf.clone(), nbf_ty.clone()),
            em,
            en,
            concl,
            motive_at,
            target: target.clone(),
            hyp: hyp.clone(),
            ids,
            y: y.clone(),
            yty: yty.clone(),
        };

        let special = epsilon_simplify_type(&yty).is_epsilon();
        if !special && self.cfg.mode != InductionMode::Simultaneous && self.cfg.strict_mode {
            return Err(ExtractError::SpecialCaseInapplicable);
        }
        if !special {
            self.fallbacks += 1;
        }
        let (rest, plus, minus) = if special {
            match self.cfg.mode {
                InductionMode::Simultaneous => self.ind_simultaneous(&parts),
                InductionMode::Flagged => self.ind_flagged(&parts),
                InductionMode::NaiveSeparate => self.ind_naive(&parts),
            }
        } else {
            self.ind_general(&parts)
        };
        let body = Term::let_in(mb, mb_ty, full_m, Term::let_in(nbf, nbf_ty, nbf_val, rest));
        Ok(Ex {
            ctx: DefContext::new(Term::lam(y.clone(), yty.clone(), body)),
            y,
            yty,
            plus,
            minus,
            concl: parts.concl,
        })
    }

    fn star_ty(&self, a: &Formula) -> Type {
        Type::arrow(self.minus_ty(a), self.plus_ty(a))
    }

    /// `lam z. body(z)` over the challenge type of the motive.
    fn over_challenge(&mut self, a: &Formula, body: impl FnOnce(Term) -> Term) -> Term {
        let z = self.fresh.name("z");
        let ty = self.minus_ty(a);
        Term::lam(z.clone(), ty.clone(), body(Term::var(z, ty)))
    }

    /// Bundle with functional components: each negative witness still
    /// awaits the challenge for `A(n)`.
    fn ind_general(&mut self, p: &Parts) -> (Term, Term, BTreeMap<Name, Term>) {
        let a = p.motive_at.clone();
        let tminus = self.minus_ty(&a);
        let star = self.star_ty(&a);
        let comp_tys: Vec<Type> = p
            .ids
            .iter()
            .map(|u| Type::arrow(tminus.clone(), self.neg_ty_of(u)))
            .collect();
        let bty = Type::prod(star.clone(), tuple_ty(comp_tys.clone().into_iter()));

        // base
        let base_plus = self.over_challenge(&a, |z| Term::fst(Term::app(p.mb.clone(), z)));
        let mut base_parts = Vec::new();
        for u in &p.ids {
            let idx = p.em.index_of(u);
            let canon = self.canon_neg_of(u);
            let mb = p.mb.clone();
            base_parts.push(self.over_challenge(&a, |z| match idx {
                Some(i) => sel(Term::app(mb, z), i),
                None => canon,
            }));
        }
        let base = Term::pair(base_plus, tuple(base_parts.into_iter()));

        // step
        let k = self.fresh.name("k");
        let kv = Term::var(k.clone(), Type::Nat);
        let q = self.fresh.name("q");
        let qv = Term::var(q.clone(), bty.clone());
        let nb = self.fresh.name("nb");
        let nb_ty = Type::arrow(p.en.yty.clone(), self.bundle_ty(&p.en));
        let nbv = Term::var(nb.clone(), nb_ty.clone());
        let xu = self.param(&p.hyp);
        let Term::Var(xname, _) = &xu else {
            unreachable!()
        };
        let step_plus = self.over_challenge(&a, |z| Term::fst(Term::app(nbv.clone(), z)));
        let hyp_idx = p.en.index_of(&p.hyp);
        let mut step_parts = Vec::new();
        for (i, u) in p.ids.iter().enumerate() {
            let zname = self.fresh.name("z");
            let zv = Term::var(zname.clone(), tminus.clone());
            let rz = self.fresh.name("r");
            let rz_ty = self.bundle_ty(&p.en);
            let rzv = Term::var(rz.clone(), rz_ty.clone());
            let new = p.en.index_of(u).map(|j| sel(rzv.clone(), j));
            let prev_fun = sel(qv.clone(), i);
            let body = match hyp_idx {
                Some(h) => {
                    let ch = self.value_part(sel(rzv.clone(), h));
                    let prev = Term::app(prev_fun, ch);
                    match new {
                        Some(t1) => self.contract(u, Some(t1), Some(prev)),
                        None => prev,
                    }
                }
                None => new.unwrap_or_else(|| self.canon_neg_of(u)),
            };
            let body = Term::let_in(rz, rz_ty, Term::app(nbv.clone(), zv), body);
            step_parts.push(Term::lam(zname, tminus.clone(), body));
        }
        let step_body = Term::let_in(
            xname.clone(),
            star.clone(),
            Term::fst(qv.clone()),
            Term::let_in(
                nb,
                nb_ty,
                Term::apps(p.nbf.clone(), [kv, xu.clone()]),
                Term::pair(step_plus, tuple(step_parts.into_iter())),
            ),
        );
        let step = Term::lam(k, Type::Nat, Term::lam(q, bty.clone(), step_body));

        let bnd = self.fresh.name("bnd");
        let bv = Term::var(bnd.clone(), bty.clone());
        let rest = Term::let_in(
            bnd,
            bty.clone(),
            Term::rec(bty, p.target.clone(), base, step),
            hole_var(),
        );
        let yv = Term::var(p.y.clone(), p.yty.clone());
        let plus = Term::app(Term::fst(bv.clone()), yv.clone());
        let minus = p
            .ids
            .iter()
            .enumerate()
            .map(|(i, u)| (u.clone(), Term::app(sel(bv.clone(), i), yv.clone())))
            .collect();
        (rest, plus, minus)
    }

    /// Base bundle value of M at the (trivial) challenge.
    fn special_base(&mut self, p: &Parts, flagged: bool) -> (Name, Term, Vec<Term>) {
        let rb = self.fresh.name("rb");
        let yv = Term::var(p.y.clone(), p.yty.clone());
        let rbv = Term::var(rb.clone(), self.bundle_ty(&p.em));
        let comps = p
            .ids
            .iter()
            .map(|u| {
                let t = match p.em.index_of(u) {
                    Some(i) => sel(rbv.clone(), i),
                    None => self.canon_neg_of(u),
                };
                if flagged {
                    Term::pair(t, Term::ff())
                } else {
                    t
                }
            })
            .collect();
        (rb, Term::app(p.mb.clone(), yv), comps)
    }

    /// `let x_u := <prev> in let r := nbf k x_u y in <body(r)>`
    fn special_step_frame(
        &mut self,
        p: &Parts,
        k: &Term,
        prev_plus: Term,
        body: impl FnOnce(&mut Self, Term) -> Term,
    ) -> Term {
        let star = self.star_ty(&p.motive_at);
        let xu = self.param(&p.hyp);
        let Term::Var(xname, _) = &xu else {
            unreachable!()
        };
        let r = self.fresh.name("r");
        let r_ty = self.bundle_ty(&p.en);
        let rv = Term::var(r.clone(), r_ty.clone());
        let yv = Term::var(p.y.clone(), p.yty.clone());
        let inner = body(self, rv);
        Term::let_in(
            xname.clone(),
            star,
            prev_plus,
            Term::let_in(
                r,
                r_ty,
                Term::apps(p.nbf.clone(), [k.clone(), xu.clone(), yv]),
                inner,
            ),
        )
    }

    fn ind_simultaneous(&mut self, p: &Parts) -> (Term, Term, BTreeMap<Name, Term>) {
        let a = p.motive_at.clone();
        let star = self.star_ty(&a);
        let neg_tys: Vec<Type> = p.ids.iter().map(|u| self.neg_ty_of(u)).collect();
        let bty = Type::prod(star.clone(), tuple_ty(neg_tys.into_iter()));

        let (rb, rb_val, comps) = self.special_base(p, false);
        let mb = p.mb.clone();
        let base_plus = self.over_challenge(&a, |z| Term::fst(Term::app(mb, z)));
        let base = Term::let_in(
            rb,
            self.bundle_ty(&p.em),
            rb_val,
            Term::pair(base_plus, tuple(comps.into_iter())),
        );

        let k = self.fresh.name("k");
        let kv = Term::var(k.clone(), Type::Nat);
        let q = self.fresh.name("q");
        let qv = Term::var(q.clone(), bty.clone());
        let ids = p.ids.clone();
        let en_idx: Vec<Option<usize>> = ids.iter().map(|u| p.en.index_of(u)).collect();
        let step_body = self.special_step_frame(p, &kv, Term::fst(qv.clone()), |this, r| {
            let plus = this.over_challenge(&a, |_| Term::fst(r.clone()));
            let comps: Vec<Term> = ids
                .iter()
                .zip(&en_idx)
                .enumerate()
                .map(|(i, (u, j))| {
                    let prev = sel(qv.clone(), i);
                    match j {
                        Some(j) => this.contract(u, Some(sel(r.clone(), *j)), Some(prev)),
                        None => prev,
                    }
                })
                .collect();
            Term::pair(plus, tuple(comps.into_iter()))
        });
        let step = Term::lam(k, Type::Nat, Term::lam(q, bty.clone(), step_body));
        self.finish_special(p, bty, base, step, false)
    }

    fn ind_flagged(&mut self, p: &Parts) -> (Term, Term, BTreeMap<Name, Term>) {
        let a = p.motive_at.clone();
        let star = self.star_ty(&a);
        let comp_tys: Vec<Type> = p
            .ids
            .iter()
            .map(|u| Type::prod(self.neg_ty_of(u), Type::Bool))
            .collect();
        let bty = Type::prod(star.clone(), tuple_ty(comp_tys.into_iter()));

        let (rb, rb_val, comps) = self.special_base(p, true);
        let mb = p.mb.clone();
        let base_plus = self.over_challenge(&a, |z| Term::fst(Term::app(mb, z)));
        let base = Term::let_in(
            rb,
            self.bundle_ty(&p.em),
            rb_val,
            Term::pair(base_plus, tuple(comps.into_iter())),
        );

        let k = self.fresh.name("k");
        let kv = Term::var(k.clone(), Type::Nat);
        let q = self.fresh.name("q");
        let qv = Term::var(q.clone(), bty.clone());
        let ids = p.ids.clone();
        let en_idx: Vec<Option<usize>> = ids.iter().map(|u| p.en.index_of(u)).collect();
        let step_body = self.special_step_frame(p, &kv, Term::fst(qv.clone()), |this, r| {
            let plus = this.over_challenge(&a, |_| Term::fst(r.clone()));
            let comps: Vec<Term> = ids
                .iter()
                .zip(&en_idx)
                .enumerate()
                .map(|(i, (u, j))| {
                    let prev = sel(qv.clone(), i);
                    match j {
                        Some(j) => {
                            let c = this.formula_of(u).clone();
                            let spec = ContractSpec {
                                formula: &c,
                                param: this.param(u),
                                t1: Some(Term::fst(prev.clone())),
                                t2: Some(sel(r.clone(), *j)),
                            };
                            let flag = Term::snd(prev);
                            match this.cfg.variant {
                                Variant::QuasiLinear => {
                                    checked_contract(flag, spec, &mut this.fresh)
                                }
                                Variant::Marked => {
                                    checked_contract_marked(flag, spec, &mut this.fresh)
                                }
                            }
                        }
                        None => prev,
                    }
                })
                .collect();
            Term::pair(plus, tuple(comps.into_iter()))
        });
        let step = Term::lam(k, Type::Nat, Term::lam(q, bty.clone(), step_body));
        self.finish_special(p, bty, base, step, true)
    }

    /// Positive content recomputed from scratch at every step of the
    /// negative recursion.
    fn ind_naive(&mut self, p: &Parts) -> (Term, Term, BTreeMap<Name, Term>) {
        let a = p.motive_at.clone();
        let star = self.star_ty(&a);

        // pplus := lam j. Rec j (lam z. (mb z).1) (lam k q. lam z. (nbf k q z).1)
        let j = self.fresh.name("j");
        let jv = Term::var(j.clone(), Type::Nat);
        let mb = p.mb.clone();
        let pbase = self.over_challenge(&a, |z| Term::fst(Term::app(mb, z)));
        let k = self.fresh.name("k");
        let kv = Term::var(k.clone(), Type::Nat);
        let q = self.fresh.name("q");
        let qv = Term::var(q.clone(), star.clone());
        let nbf = p.nbf.clone();
        let pstep_body = self.over_challenge(&a, |z| {
            Term::fst(Term::apps(nbf, [kv.clone(), qv.clone(), z]))
        });
        let pstep = Term::lam(k, Type::Nat, Term::lam(q, star.clone(), pstep_body));
        let pplus_val = Term::lam(j, Type::Nat, Term::rec(star.clone(), jv, pbase, pstep));
        let pplus = self.fresh.name("pplus");
        let pplus_ty = Type::arrow(Type::Nat, star.clone());
        let pplusv = Term::var(pplus.clone(), pplus_ty.clone());

        let neg_tys: Vec<Type> = p.ids.iter().map(|u| self.neg_ty_of(u)).collect();
        let nty = tuple_ty(neg_tys.into_iter());
        let (rb, rb_val, comps) = self.special_base(p, false);
        let base = Term::let_in(rb, self.bundle_ty(&p.em), rb_val, tuple(comps.into_iter()));

        let k2 = self.fresh.name("k");
        let k2v = Term::var(k2.clone(), Type::Nat);
        let qn = self.fresh.name("q");
        let qnv = Term::var(qn.clone(), nty.clone());
        let ids = p.ids.clone();
        let en_idx: Vec<Option<usize>> = ids.iter().map(|u| p.en.index_of(u)).collect();
        let prev_plus = Term::app(pplusv.clone(), k2v.clone());
        let step_body = self.special_step_frame(p, &k2v, prev_plus, |this, r| {
            let comps: Vec<Term> = ids
                .iter()
                .zip(&en_idx)
                .enumerate()
                .map(|(i, (u, j))| {
                    let prev = super::engine::nth(qnv.clone(), i);
                    match j {
                        Some(j) => this.contract(u, Some(sel(r.clone(), *j)), Some(prev)),
                        None => prev,
                    }
                })
                .collect();
            tuple(comps.into_iter())
        });
        let step = Term::lam(k2, Type::Nat, Term::lam(qn, nty.clone(), step_body));

        let neg = self.fresh.name("neg");
        let negv = Term::var(neg.clone(), nty.clone());
        let rest = Term::let_in(
            pplus,
            pplus_ty,
            pplus_val,
            Term::let_in(
                neg,
                nty.clone(),
                Term::rec(nty, p.target.clone(), base, step),
                hole_var(),
            ),
        );
        let yv = Term::var(p.y.clone(), p.yty.clone());
        let plus = Term::app(Term::app(pplusv, p.target.clone()), yv);
        let minus = p
            .ids
            .iter()
            .enumerate()
            .map(|(i, u)| (u.clone(), super::engine::nth(negv.clone(), i)))
            .collect();
        (rest, plus, minus)
    }

    fn finish_special(
        &mut self,
        p: &Parts,
        bty: Type,
        base: Term,
        step: Term,
        flagged: bool,
    ) -> (Term, Term, BTreeMap<Name, Term>) {
        let bnd = self.fresh.name("bnd");
        let bv = Term::var(bnd.clone(), bty.clone());
        let rest = Term::let_in(
            bnd,
            bty.clone(),
            Term::rec(bty, p.target.clone(), base, step),
            hole_var(),
        );
        let yv = Term::var(p.y.clone(), p.yty.clone());
        let plus = Term::app(Term::fst(bv.clone()), yv);
        let minus = p
            .ids
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let c = sel(bv.clone(), i);
                (u.clone(), if flagged { Term::fst(c) } else { c })
            })
            .collect();
        (rest, plus, minus)
    }
}

#[allow(dead_code)]
fn canonical(ty: &Type) -> Term {
    canonical_inhabitant(ty)
}
