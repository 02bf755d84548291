use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::{formula_eq, Formula, Motive};
use super::proof::{Assumptions, Proof};
use crate::kernel::{infer_type, KernelError, Name, Term, Type, TypingContext};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LogicError {
    #[error("assumption `{name}` used both as {first} and as {second}")]
    AssumptionTypeClash {
        name: Name,
        first: String,
        second: String,
    },
    #[error("eigenvariable `{var}` occurs free in open assumption `{assumption}`")]
    EigenvariableViolation { var: Name, assumption: Name },
    #[error("at {path}: expected {expected}, found {found}")]
    ConclusionMismatch {
        path: String,
        expected: String,
        found: String,
    },
    #[error("ill-typed term `{term}`: {source}")]
    IllTypedEmbeddedTerm { term: String, source: KernelError },
}

/// Check a derivation and return its conclusion. Every free object
/// variable must be declared in `ctx`.
pub fn check_proof(p: &Proof, ctx: &TypingContext) -> Result<Formula, LogicError> {
    let mut checker = Checker {
        ctx: ctx.clone(),
        path: Vec::new(),
    };
    checker.check(p).map(|(a, _)| a)
}

/// Like [`check_proof`], taking the context from the annotations of the
/// free variables of `p`.
pub fn check_proof_open(p: &Proof) -> Result<Formula, LogicError> {
    check_proof(p, &annotated_context(p))
}

/// Free object variables of a proof with their annotated types.
pub fn annotated_context(p: &Proof) -> TypingContext {
    let mut out = Vec::<(Name, Type)>::new();
    collect_typed(p, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn collect_typed(p: &Proof, bound: &mut Vec<Name>, out: &mut Vec<(Name, Type)>) {
    let mut push = |vs: Vec<(Name, Type)>, bound: &Vec<Name>| {
        for (x, ty) in vs {
            if !bound.contains(&x) && !out.iter().any(|(y, _)| *y == x) {
                out.push((x, ty));
            }
        }
    };
    let motive_vars = |m: &Motive| -> Vec<(Name, Type)> {
        m.body
            .free_vars_typed()
            .into_iter()
            .filter(|(x, _)| *x != m.var)
            .collect()
    };
    match p {
        Proof::Assume(_, a) => push(a.free_vars_typed(), bound),
        Proof::ImpIntro(_, a, m) => {
            push(a.free_vars_typed(), bound);
            collect_typed(m, bound, out);
        }
        Proof::ImpElim(m, n) => {
            collect_typed(m, bound, out);
            collect_typed(n, bound, out);
        }
        Proof::AllIntro(x, _, m) => {
            bound.push(x.clone());
            collect_typed(m, bound, out);
            bound.pop();
        }
        Proof::AllElim(m, t) => {
            push(t.free_vars_typed(), bound);
            collect_typed(m, bound, out);
        }
        Proof::Truth => {}
        Proof::Cases {
            motive,
            scrutinee,
            on_tt,
            on_ff,
        } => {
            push(motive_vars(motive), bound);
            push(scrutinee.free_vars_typed(), bound);
            collect_typed(on_tt, bound, out);
            collect_typed(on_ff, bound, out);
        }
        Proof::Ind {
            motive,
            target,
            base,
            var,
            step,
            ..
        } => {
            push(motive_vars(motive), bound);
            push(target.free_vars_typed(), bound);
            collect_typed(base, bound, out);
            bound.push(var.clone());
            collect_typed(step, bound, out);
            bound.pop();
        }
    }
}

struct Checker {
    ctx: TypingContext,
    path: Vec<&'static str>,
}

impl Checker {
    fn here(&self) -> String {
        if self.path.is_empty() {
            "root".into()
        } else {
            self.path.join(".")
        }
    }

    fn mismatch(&self, expected: impl ToString, found: impl ToString) -> LogicError {
        LogicError::ConclusionMismatch {
            path: self.here(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn term(&self, t: &Term, want: &Type) -> Result<(), LogicError> {
        let ty = infer_type(t, &self.ctx).map_err(|source| LogicError::IllTypedEmbeddedTerm {
            term: t.to_string(),
            source,
        })?;
        if ty != *want {
            return Err(LogicError::IllTypedEmbeddedTerm {
                term: t.to_string(),
                source: KernelError::TypeMismatch {
                    location: self.here(),
                    expected: want.to_string(),
                    found: ty.to_string(),
                },
            });
        }
        Ok(())
    }

    fn formula(&mut self, a: &Formula) -> Result<(), LogicError> {
        match a {
            Formula::Atom(t) => self.term(t, &Type::Bool),
            Formula::Implies(a, b) => {
                self.formula(a)?;
                self.formula(b)
            }
            Formula::Forall(x, ty, body) => self.scoped(x, ty, |c| c.formula(body)),
        }
    }

    fn scoped<R>(
        &mut self,
        x: &Name,
        ty: &Type,
        f: impl FnOnce(&mut Self) -> Result<R, LogicError>,
    ) -> Result<R, LogicError> {
        let saved = self.ctx.clone();
        self.ctx = saved.clone().with(x.clone(), ty.clone());
        let r = f(self);
        self.ctx = saved;
        r
    }

    fn sub<R>(
        &mut self,
        label: &'static str,
        f: impl FnOnce(&mut Self) -> Result<R, LogicError>,
    ) -> Result<R, LogicError> {
        self.path.push(label);
        let r = f(self);
        self.path.pop();
        r
    }

    fn expect(&self, expected: &Formula, found: &Formula) -> Result<(), LogicError> {
        if formula_eq(expected, found) {
            Ok(())
        } else {
            Err(self.mismatch(expected, found))
        }
    }

    fn merge(&self, into: &mut Assumptions, from: Assumptions) -> Result<(), LogicError> {
        for (u, a) in from {
            if let Some(old) = into.get(&u) {
                if !formula_eq(old, &a) {
                    return Err(LogicError::AssumptionTypeClash {
                        name: u,
                        first: old.to_string(),
                        second: a.to_string(),
                    });
                }
            } else {
                into.insert(u, a);
            }
        }
        Ok(())
    }

    fn eigen(&self, x: &Name, open: &Assumptions) -> Result<(), LogicError> {
        for (u, a) in open {
            if a.free_vars().contains(x) {
                return Err(LogicError::EigenvariableViolation {
                    var: x.clone(),
                    assumption: u.clone(),
                });
            }
        }
        Ok(())
    }

    fn discharge(&self, u: &Name, a: &Formula, open: &mut Assumptions) -> Result<(), LogicError> {
        if let Some(b) = open.remove(u) {
            if !formula_eq(a, &b) {
                return Err(LogicError::AssumptionTypeClash {
                    name: u.clone(),
                    first: a.to_string(),
                    second: b.to_string(),
                });
            }
        }
        Ok(())
    }

    fn motive(&mut self, m: &Motive, want: &Type) -> Result<(), LogicError> {
        if m.ty != *want {
            return Err(self.mismatch(
                format!("motive over {want}"),
                format!("motive over {}", m.ty),
            ));
        }
        self.scoped(&m.var, &m.ty, |c| c.formula(&m.body))
    }

    fn check(&mut self, p: &Proof) -> Result<(Formula, Assumptions), LogicError> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.check_inner(p))
    }

    fn check_inner(&mut self, p: &Proof) -> Result<(Formula, Assumptions), LogicError> {
        match p {
            Proof::Assume(u, a) => {
                self.formula(a)?;
                Ok((a.clone(), Assumptions::from([(u.clone(), a.clone())])))
            }
            Proof::ImpIntro(u, a, m) => {
                self.formula(a)?;
                let (b, mut open) = self.sub("imp-intro", |c| c.check(m))?;
                self.discharge(u, a, &mut open)?;
                Ok((Formula::implies(a.clone(), b), open))
            }
            Proof::ImpElim(m, n) => {
                let (f, mut open) = self.sub("imp-elim.fun", |c| c.check(m))?;
                let (a, open_n) = self.sub("imp-elim.arg", |c| c.check(n))?;
                let Formula::Implies(dom, cod) = &f else {
                    return Err(self.mismatch("an implication", &f));
                };
                self.sub("imp-elim.arg", |c| c.expect(dom, &a))?;
                self.merge(&mut open, open_n)?;
                Ok(((**cod).clone(), open))
            }
            Proof::AllIntro(x, ty, m) => {
                let (a, open) = self.scoped(x, ty, |c| c.sub("all-intro", |c| c.check(m)))?;
                self.eigen(x, &open)?;
                Ok((Formula::forall(x.clone(), ty.clone(), a), open))
            }
            Proof::AllElim(m, t) => {
                let (f, open) = self.sub("all-elim", |c| c.check(m))?;
                let Formula::Forall(x, ty, body) = &f else {
                    return Err(self.mismatch("a universal formula", &f));
                };
                self.term(t, ty)?;
                Ok((body.subst(x, t), open))
            }
            Proof::Truth => Ok((Formula::truth(), Assumptions::new())),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                self.motive(motive, &Type::Bool)?;
                self.term(scrutinee, &Type::Bool)?;
                let (a, mut open) = self.sub("cases.tt", |c| c.check(on_tt))?;
                self.sub("cases.tt", |c| {
                    c.expect(&motive.instantiate(&Term::tt()), &a)
                })?;
                let (b, open_b) = self.sub("cases.ff", |c| c.check(on_ff))?;
                self.sub("cases.ff", |c| {
                    c.expect(&motive.instantiate(&Term::ff()), &b)
                })?;
                self.merge(&mut open, open_b)?;
                Ok((motive.instantiate(scrutinee), open))
            }
            Proof::Ind {
                motive,
                target,
                base,
                var,
                hyp,
                step,
            } => {
                self.motive(motive, &Type::Nat)?;
                self.term(target, &Type::Nat)?;
                let (a0, mut open) = self.sub("ind.base", |c| c.check(base))?;
                self.sub("ind.base", |c| {
                    c.expect(&motive.instantiate(&Term::zero()), &a0)
                })?;
                if motive.free_vars().contains(var) {
                    return Err(LogicError::EigenvariableViolation {
                        var: var.clone(),
                        assumption: Name::from("motive"),
                    });
                }
                let m = Term::var(var.clone(), Type::Nat);
                let (a1, mut open_s) =
                    self.scoped(var, &Type::Nat, |c| c.sub("ind.step", |c| c.check(step)))?;
                self.sub("ind.step", |c| {
                    c.expect(&motive.instantiate(&Term::succ(m.clone())), &a1)
                })?;
                self.discharge(hyp, &motive.instantiate(&m), &mut open_s)?;
                self.eigen(var, &open_s)?;
                self.merge(&mut open, open_s)?;
                Ok((motive.instantiate(target), open))
            }
        }
    }
}

/// Rename bound assumption and object variables so that every binder is
/// distinct from every other binder and from the free names of `p`.
pub fn freshen(p: &Proof) -> Proof {
    let mut used: BTreeSet<Name> = p.fv();
    used.extend(p.fa_names());
    let mut all = BTreeSet::new();
    p.all_names(&mut all);
    let mut f = Freshener { used, all };
    f.go(p)
}

struct Freshener {
    used: BTreeSet<Name>,
    all: BTreeSet<Name>,
}

impl Freshener {
    fn pick(&mut self, x: &Name) -> Name {
        if self.used.insert(x.clone()) {
            self.all.insert(x.clone());
            return x.clone();
        }
        let mut avoid = self.used.clone();
        avoid.extend(self.all.iter().cloned());
        let y = fresh_name(x, &avoid);
        self.used.insert(y.clone());
        self.all.insert(y.clone());
        y
    }

    fn go(&mut self, p: &Proof) -> Proof {
        match p {
            Proof::Assume(..) | Proof::Truth => p.clone(),
            Proof::ImpIntro(u, a, m) => {
                let u2 = self.pick(u);
                let m = if u2 == *u {
                    (**m).clone()
                } else {
                    m.rename_assumption(u, &u2)
                };
                Proof::imp_intro(u2, a.clone(), self.go(&m))
            }
            Proof::ImpElim(m, n) => {
                let m = self.go(m);
                Proof::imp_elim(m, self.go(n))
            }
            Proof::AllIntro(x, ty, m) => {
                let x2 = self.pick(x);
                let m = if x2 == *x {
                    (**m).clone()
                } else {
                    m.subst_obj(x, &Term::Var(x2.clone(), ty.clone()))
                };
                Proof::all_intro(x2, ty.clone(), self.go(&m))
            }
            Proof::AllElim(m, t) => Proof::all_elim(self.go(m), t.clone()),
            Proof::Cases {
                motive,
                scrutinee,
                on_tt,
                on_ff,
            } => {
                let a = self.go(on_tt);
                let b = self.go(on_ff);
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
                let base = self.go(base);
                let v2 = self.pick(var);
                let h2 = self.pick(hyp);
                let mut s = (**step).clone();
                if v2 != *var {
                    s = s.subst_obj(var, &Term::Var(v2.clone(), Type::Nat));
                }
                if h2 != *hyp {
                    s = s.rename_assumption(hyp, &h2);
                }
                let s = self.go(&s);
                Proof::ind(motive.clone(), target.clone(), base, v2, h2, s)
            }
        }
    }
}

fn fresh_name(x: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = x.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { x } else { stem };
    (1..)
        .map(|k| Name::from(format!("{stem}_{k}")))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}
