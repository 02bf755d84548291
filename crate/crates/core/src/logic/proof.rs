use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::formula::{Formula, Motive};
use crate::kernel::{fresh_variant, Name, Term, Type};

/// Natural deduction derivations for `->` and `all`, plus the `Truth`,
/// `Cases` and `Ind` axioms in rule form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    Assume(Name, Formula),
    ImpIntro(Name, Formula, Arc<Proof>),
    ImpElim(Arc<Proof>, Arc<Proof>),
    AllIntro(Name, Type, Arc<Proof>),
    AllElim(Arc<Proof>, Term),
    Truth,
    /// From `A(tt)` and `A(ff)` conclude `A(b)`.
    Cases {
        motive: Motive,
        scrutinee: Term,
        on_tt: Arc<Proof>,
        on_ff: Arc<Proof>,
    },
    /// From `A(0)` and `A(m) -> A(S m)` (with `u : A(m)`) conclude `A(t)`.
    Ind {
        motive: Motive,
        target: Term,
        base: Arc<Proof>,
        var: Name,
        hyp: Name,
        step: Arc<Proof>,
    },
}

/// Free assumptions of a proof with their formulas.
pub type Assumptions = BTreeMap<Name, Formula>;

impl Proof {
    pub fn assume(u: impl Into<Name>, a: Formula) -> Proof {
        Proof::Assume(u.into(), a)
    }

    pub fn imp_intro(u: impl Into<Name>, a: Formula, body: Proof) -> Proof {
        Proof::ImpIntro(u.into(), a, Arc::new(body))
    }

    pub fn imp_elim(m: Proof, n: Proof) -> Proof {
        Proof::ImpElim(Arc::new(m), Arc::new(n))
    }

    pub fn imp_elims<I: IntoIterator<Item = Proof>>(m: Proof, args: I) -> Proof {
        args.into_iter().fold(m, Proof::imp_elim)
    }

    pub fn all_intro(x: impl Into<Name>, ty: Type, body: Proof) -> Proof {
        Proof::AllIntro(x.into(), ty, Arc::new(body))
    }

    pub fn all_elim(m: Proof, t: Term) -> Proof {
        Proof::AllElim(Arc::new(m), t)
    }

    pub fn cases(motive: Motive, scrutinee: Term, on_tt: Proof, on_ff: Proof) -> Proof {
        Proof::Cases {
            motive,
            scrutinee,
            on_tt: Arc::new(on_tt),
            on_ff: Arc::new(on_ff),
        }
    }

    pub fn ind(
        motive: Motive,
        target: Term,
        base: Proof,
        var: impl Into<Name>,
        hyp: impl Into<Name>,
        step: Proof,
    ) -> Proof {
        Proof::Ind {
            motive,
            target,
            base: Arc::new(base),
            var: var.into(),
            hyp: hyp.into(),
            step: Arc::new(step),
        }
    }

    /// Free assumption variables. A name used with two different formulas
    /// keeps the first one; the checker reports the clash.
    pub fn fa(&self) -> Assumptions {
        let mut out = Assumptions::new();
        self.collect_fa(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fa(&self, bound: &mut Vec<Name>, out: &mut Assumptions) {
        match self {
            Proof::Assume(u, a) => {
                if !bound.contains(u) {
                    out.entry(u.clone()).or_insert_with(|| a.clone());
                }
            }
            Proof::ImpIntro(u, _, m) => {
                bound.push(u.clone());
                m.collect_fa(bound, out);
                bound.pop();
            }
            Proof::ImpElim(m, n) => {
                m.collect_fa(bound, out);
                n.collect_fa(bound, out);
            }
            Proof::AllIntro(_, _, m) | Proof::AllElim(m, _) => m.collect_fa(bound, out),
            Proof::Truth => {}
            Proof::Cases { on_tt, on_ff, .. } => {
                on_tt.collect_fa(bound, out);
                on_ff.collect_fa(bound, out);
            }
            Proof::Ind {
                base, hyp, step, ..
            } => {
                base.collect_fa(bound, out);
                bound.push(hyp.clone());
                step.collect_fa(bound, out);
                bound.pop();
            }
        }
    }

    pub fn fa_names(&self) -> BTreeSet<Name> {
        self.fa().into_keys().collect()
    }

    /// Free object variables, in embedded terms and formulas alike.
    pub fn fv(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |names: BTreeSet<Name>, bound: &Vec<Name>| {
            for x in names {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        };
        match self {
            Proof::Assume(_, a) => add(a.free_vars(), bound),
            Proof::ImpIntro(_, a, m) => {
                add(a.free_vars(), bound);
                m.collect_fv(bound, out);
            }
            Proof::ImpElim(m, n) => {
                m.collect_fv(bound, out);
                n.collect_fv(bound, out);
            }
            Proof::AllIntro(x, _, m) => {
                bound.push(x.clone());
                m.collect_fv(bound, out);
                bound.pop();
            }
            Proof::AllElim(m, t) => {
                add(t.free_vars(), bound);
                m.collect_fv(bound, out);
            }
            Proof::Truth => {}
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                add(motive.free_vars(), bound);
                add(scrutinee.free_vars(), bound);
                on_tt.collect_fv(bound, out);
                on_ff.collect_fv(bound, out);
            }
            Proof::Ind {
                motive,
                target,
                base,
                var,
                step,
                ..
            } => {
                add(motive.free_vars(), bound);
                add(target.free_vars(), bound);
                base.collect_fv(bound, out);
                bound.push(var.clone());
                step.collect_fv(bound, out);
                bound.pop();
            }
        }
    }

    /// Every name occurring anywhere: binders, assumptions and term variables.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Proof::Assume(u, a) => {
                out.insert(u.clone());
                a.all_names(out);
            }
            Proof::ImpIntro(u, a, m) => {
                out.insert(u.clone());
                a.all_names(out);
                m.all_names(out);
            }
            Proof::ImpElim(m, n) => {
                m.all_names(out);
                n.all_names(out);
            }
            Proof::AllIntro(x, _, m) => {
                out.insert(x.clone());
                m.all_names(out);
            }
            Proof::AllElim(m, t) => {
                t.all_names(out);
                m.all_names(out);
            }
            Proof::Truth => {}
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                out.insert(motive.var.clone());
                motive.body.all_names(out);
                scrutinee.all_names(out);
                on_tt.all_names(out);
                on_ff.all_names(out);
            }
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => {
                out.insert(motive.var.clone());
                motive.body.all_names(out);
                target.all_names(out);
                out.insert(var.clone());
                out.insert(hyp.clone());
                base.all_names(out);
                step.all_names(out);
            }
        }
    }

    /// Rule applications plus the sizes of embedded terms. Formula
    /// annotations do not count.
    pub fn size(&self) -> usize {
        match self {
            Proof::Assume(..) | Proof::Truth => 1,
            Proof::ImpIntro(_, _, m) | Proof::AllIntro(_, _, m) => 1 + m.size(),
            Proof::ImpElim(m, n) => 1 + m.size() + n.size(),
            Proof::AllElim(m, t) => 1 + m.size() + t.size(),
            Proof::Cases {
                scrutinee,
                on_tt,
                on_ff,
                ..
            } => 1 + scrutinee.size() + on_tt.size() + on_ff.size(),
            Proof::Ind {
                target, base, step, ..
            } => 1 + target.size() + base.size() + step.size(),
        }
    }

    /// Maximal number of free assumptions of any subproof.
    pub fn msl(&self) -> usize {
        self.msl_and_fa().0
    }

    fn msl_and_fa(&self) -> (usize, BTreeSet<Name>) {
        let (inner, fa) = match self {
            Proof::Assume(u, _) => (0, BTreeSet::from([u.clone()])),
            Proof::Truth => (0, BTreeSet::new()),
            Proof::ImpIntro(u, _, m) => {
                let (k, mut fa) = m.msl_and_fa();
                fa.remove(u);
                (k, fa)
            }
            Proof::AllIntro(_, _, m) | Proof::AllElim(m, _) => m.msl_and_fa(),
            Proof::ImpElim(m, n)
            | Proof::Cases {
                on_tt: m, on_ff: n, ..
            } => {
                let (k1, mut f1) = m.msl_and_fa();
                let (k2, f2) = n.msl_and_fa();
                f1.extend(f2);
                (k1.max(k2), f1)
            }
            Proof::Ind {
                base, hyp, step, ..
            } => {
                let (k1, mut f1) = base.msl_and_fa();
                let (k2, mut f2) = step.msl_and_fa();
                f2.remove(hyp);
                f1.extend(f2);
                (k1.max(k2), f1)
            }
        };
        (inner.max(fa.len()), fa)
    }

    /// Number of rule applications, ignoring terms.
    pub fn node_count(&self) -> usize {
        match self {
            Proof::Assume(..) | Proof::Truth => 1,
            Proof::ImpIntro(_, _, m) | Proof::AllIntro(_, _, m) | Proof::AllElim(m, _) => {
                1 + m.node_count()
            }
            Proof::ImpElim(m, n)
            | Proof::Cases {
                on_tt: m, on_ff: n, ..
            } => 1 + m.node_count() + n.node_count(),
            Proof::Ind { base, step, .. } => 1 + base.node_count() + step.node_count(),
        }
    }

    pub fn count_ind(&self) -> usize {
        match self {
            Proof::Assume(..) | Proof::Truth => 0,
            Proof::ImpIntro(_, _, m) | Proof::AllIntro(_, _, m) | Proof::AllElim(m, _) => {
                m.count_ind()
            }
            Proof::ImpElim(m, n)
            | Proof::Cases {
                on_tt: m, on_ff: n, ..
            } => m.count_ind() + n.count_ind(),
            Proof::Ind { base, step, .. } => 1 + base.count_ind() + step.count_ind(),
        }
    }

    /// Substitute an object term for a free object variable.
    pub fn subst_obj(&self, x: &str, t: &Term) -> Proof {
        let fv_t = t.free_vars();
        self.subst_obj_with(x, t, &fv_t)
    }

    fn subst_obj_with(&self, x: &str, t: &Term, fv_t: &BTreeSet<Name>) -> Proof {
        match self {
            Proof::Assume(u, a) => Proof::Assume(u.clone(), a.subst(x, t)),
            Proof::ImpIntro(u, a, m) => {
                Proof::imp_intro(u.clone(), a.subst(x, t), m.subst_obj_with(x, t, fv_t))
            }
            Proof::ImpElim(m, n) => {
                Proof::imp_elim(m.subst_obj_with(x, t, fv_t), n.subst_obj_with(x, t, fv_t))
            }
            Proof::AllIntro(y, ty, m) => {
                if &**y == x {
                    return self.clone();
                }
                let (y, m) = self.avoid_obj(y, ty, m, fv_t, x);
                Proof::all_intro(y, ty.clone(), m.subst_obj_with(x, t, fv_t))
            }
            Proof::AllElim(m, s) => Proof::all_elim(m.subst_obj_with(x, t, fv_t), s.subst(x, t)),
            Proof::Truth => Proof::Truth,
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => Proof::cases(
                motive.subst(x, t),
                scrutinee.subst(x, t),
                on_tt.subst_obj_with(x, t, fv_t),
                on_ff.subst_obj_with(x, t, fv_t),
            ),
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => {
                let step = if &**var == x {
                    (var.clone(), (**step).clone())
                } else {
                    let (v, s) = self.avoid_obj(var, &Type::Nat, step, fv_t, x);
                    (v, s.subst_obj_with(x, t, fv_t))
                };
                Proof::ind(
                    motive.subst(x, t),
                    target.subst(x, t),
                    base.subst_obj_with(x, t, fv_t),
                    step.0,
                    hyp.clone(),
                    step.1,
                )
            }
        }
    }

    /// Rename binder `y` of `body` if it would capture a variable of `fv`.
    fn avoid_obj(
        &self,
        y: &Name,
        ty: &Type,
        body: &Proof,
        fv: &BTreeSet<Name>,
        x: &str,
    ) -> (Name, Proof) {
        if !fv.contains(y) {
            return (y.clone(), body.clone());
        }
        let mut avoid = fv.clone();
        body.all_names(&mut avoid);
        avoid.insert(Name::from(x));
        let y2 = fresh_variant(y, &avoid);
        let renamed = body.subst_obj(y, &Term::Var(y2.clone(), ty.clone()));
        (y2, renamed)
    }

    /// Rename free occurrences of assumption `u` to `v`.
    pub fn rename_assumption(&self, u: &str, v: &Name) -> Proof {
        match self {
            Proof::Assume(w, a) if &**w == u => Proof::Assume(v.clone(), a.clone()),
            Proof::Assume(..) | Proof::Truth => self.clone(),
            Proof::ImpIntro(w, _, _) if &**w == u => self.clone(),
            Proof::ImpIntro(w, a, m) => {
                Proof::imp_intro(w.clone(), a.clone(), m.rename_assumption(u, v))
            }
            Proof::ImpElim(m, n) => {
                Proof::imp_elim(m.rename_assumption(u, v), n.rename_assumption(u, v))
            }
            Proof::AllIntro(x, ty, m) => {
                Proof::all_intro(x.clone(), ty.clone(), m.rename_assumption(u, v))
            }
            Proof::AllElim(m, t) => Proof::all_elim(m.rename_assumption(u, v), t.clone()),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => Proof::cases(
                motive.clone(),
                scrutinee.clone(),
                on_tt.rename_assumption(u, v),
                on_ff.rename_assumption(u, v),
            ),
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => Proof::ind(
                motive.clone(),
                target.clone(),
                base.rename_assumption(u, v),
                var.clone(),
                hyp.clone(),
                if &**hyp == u {
                    (**step).clone()
                } else {
                    step.rename_assumption(u, v)
                },
            ),
        }
    }

    /// Replace the free assumption `u` by the proof `n`, renaming binders
    /// of `self` that would capture assumptions or variables of `n`.
    pub fn subst_assumption(&self, u: &str, n: &Proof) -> Proof {
        let fa = n.fa_names();
        let fv = n.fv();
        let mut avoid = BTreeSet::new();
        n.all_names(&mut avoid);
        self.all_names(&mut avoid);
        self.subst_assumption_with(u, n, &fa, &fv, &mut avoid)
    }

    fn subst_assumption_with(
        &self,
        u: &str,
        n: &Proof,
        fa: &BTreeSet<Name>,
        fv: &BTreeSet<Name>,
        avoid: &mut BTreeSet<Name>,
    ) -> Proof {
        let go =
            |p: &Proof, avoid: &mut BTreeSet<Name>| p.subst_assumption_with(u, n, fa, fv, avoid);
        match self {
            Proof::Assume(w, _) if &**w == u => n.clone(),
            Proof::Assume(..) | Proof::Truth => self.clone(),
            Proof::ImpIntro(w, _, _) if &**w == u => self.clone(),
            Proof::ImpIntro(w, a, m) => {
                if fa.contains(w) {
                    let w2 = fresh_variant(w, avoid);
                    avoid.insert(w2.clone());
                    let m = m.rename_assumption(w, &w2);
                    Proof::imp_intro(w2, a.clone(), go(&m, avoid))
                } else {
                    Proof::imp_intro(w.clone(), a.clone(), go(m, avoid))
                }
            }
            Proof::ImpElim(m, k) => {
                let m = go(m, avoid);
                Proof::imp_elim(m, go(k, avoid))
            }
            Proof::AllIntro(x, ty, m) => {
                if fv.contains(x) {
                    let x2 = fresh_variant(x, avoid);
                    avoid.insert(x2.clone());
                    let m = m.subst_obj(x, &Term::Var(x2.clone(), ty.clone()));
                    Proof::all_intro(x2, ty.clone(), go(&m, avoid))
                } else {
                    Proof::all_intro(x.clone(), ty.clone(), go(m, avoid))
                }
            }
            Proof::AllElim(m, t) => Proof::all_elim(go(m, avoid), t.clone()),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                let a = go(on_tt, avoid);
                let b = go(on_ff, avoid);
                Proof::cases(motive.clone(), scrutinee.clone(), a, b)
            }
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => {
                let base = go(base, avoid);
                if &**hyp == u {
                    return Proof::ind(
                        motive.clone(),
                        target.clone(),
                        base,
                        var.clone(),
                        hyp.clone(),
                        (**step).clone(),
                    );
                }
                let mut step = (**step).clone();
                let mut var = var.clone();
                let mut hyp = hyp.clone();
                if fv.contains(&var) {
                    let v2 = fresh_variant(&var, avoid);
                    avoid.insert(v2.clone());
                    step = step.subst_obj(&var, &Term::Var(v2.clone(), Type::Nat));
                    var = v2;
                }
                if fa.contains(&hyp) {
                    let h2 = fresh_variant(&hyp, avoid);
                    avoid.insert(h2.clone());
                    step = step.rename_assumption(&hyp, &h2);
                    hyp = h2;
                }
                let step = go(&step, avoid);
                Proof::ind(motive.clone(), target.clone(), base, var, hyp, step)
            }
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Assume(u, a) => write!(f, "(assume {u} {a})"),
            Proof::ImpIntro(u, a, m) => write!(f, "(imp-intro {u} {a} {m})"),
            Proof::ImpElim(m, n) => write!(f, "(imp-elim {m} {n})"),
            Proof::AllIntro(x, ty, m) => write!(f, "(all-intro {x} {ty} {m})"),
            Proof::AllElim(m, t) => write!(f, "(all-elim {m} {t})"),
            Proof::Truth => write!(f, "(truth)"),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => write!(f, "(cases {motive} {scrutinee} {on_tt} {on_ff})"),
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => write!(f, "(ind {motive} {target} {base} {var} {hyp} {step})"),
        }
    }
}
