use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Name, Type};

/// Term constants of System T extended with the marker type.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Const {
    Tt,
    Ff,
    Zero,
    Succ,
    /// `bool => s => s => s`
    If(Type),
    /// `nat => s => (nat => s => s) => s`
    Rec(Type),
    MarkTt,
    MarkFf,
    MarkBot,
    /// `mark => s => s => s => s`, branches in the order tt, ff, bot.
    MarkCase(Type),
    /// `mark => mark => bool`
    MarkEq,
}

impl Const {
    pub fn arity(&self) -> usize {
        match self {
            Const::Succ => 1,
            Const::If(_) | Const::Rec(_) => 3,
            Const::MarkCase(_) => 4,
            Const::MarkEq => 2,
            _ => 0,
        }
    }

    pub fn ty(&self) -> Type {
        match self {
            Const::Tt | Const::Ff => Type::Bool,
            Const::Zero => Type::Nat,
            Const::Succ => Type::arrow(Type::Nat, Type::Nat),
            Const::If(s) => Type::arrows([Type::Bool, s.clone(), s.clone()], s.clone()),
            Const::Rec(s) => Type::arrows(
                [
                    Type::Nat,
                    s.clone(),
                    Type::arrows([Type::Nat, s.clone()], s.clone()),
                ],
                s.clone(),
            ),
            Const::MarkTt | Const::MarkFf | Const::MarkBot => Type::Mark,
            Const::MarkCase(s) => {
                Type::arrows([Type::Mark, s.clone(), s.clone(), s.clone()], s.clone())
            }
            Const::MarkEq => Type::arrows([Type::Mark, Type::Mark], Type::Bool),
        }
    }
}

/// Object terms. Variables carry their type, so every closed-or-open term
/// can synthesize its own type.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Name, Type),
    Lam(Name, Type, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    Const(Const),
    /// A counterexample check. Semantically transparent; the evaluator
    /// counts how often it is forced.
    Check(Arc<Term>),
    /// The unique term of the nulltype.
    Eps,
}

pub const HOLE_NAME: &str = "%hole";

impl Term {
    pub fn var(name: impl Into<Name>, ty: Type) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn lam(name: impl Into<Name>, ty: Type, body: Term) -> Term {
        Term::Lam(name.into(), ty, Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Arc::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Arc::new(t))
    }

    pub fn check(t: Term) -> Term {
        Term::Check(Arc::new(t))
    }

    pub fn tt() -> Term {
        Term::Const(Const::Tt)
    }

    pub fn ff() -> Term {
        Term::Const(Const::Ff)
    }

    pub fn zero() -> Term {
        Term::Const(Const::Zero)
    }

    pub fn succ(t: Term) -> Term {
        Term::app(Term::Const(Const::Succ), t)
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::zero(), |acc, _| Term::succ(acc))
    }

    pub fn mark_tt() -> Term {
        Term::Const(Const::MarkTt)
    }

    pub fn mark_ff() -> Term {
        Term::Const(Const::MarkFf)
    }

    pub fn mark_bot() -> Term {
        Term::Const(Const::MarkBot)
    }

    pub fn mark_eq(a: Term, b: Term) -> Term {
        Term::apps(Term::Const(Const::MarkEq), [a, b])
    }

    /// `if b then x else y` at result type `ty`.
    pub fn ite(ty: Type, b: Term, x: Term, y: Term) -> Term {
        Term::apps(Term::Const(Const::If(ty)), [b, x, y])
    }

    pub fn rec(ty: Type, n: Term, base: Term, step: Term) -> Term {
        Term::apps(Term::Const(Const::Rec(ty)), [n, base, step])
    }

    pub fn mark_case(ty: Type, m: Term, on_tt: Term, on_ff: Term, on_bot: Term) -> Term {
        Term::apps(Term::Const(Const::MarkCase(ty)), [m, on_tt, on_ff, on_bot])
    }

    /// `let x := t in body`, i.e. `(lam x. body) t`.
    pub fn let_in(name: impl Into<Name>, ty: Type, t: Term, body: Term) -> Term {
        Term::app(Term::lam(name, ty, body), t)
    }

    pub fn hole(ty: Type) -> Term {
        Term::var(HOLE_NAME, ty)
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Term::Const(Const::Zero) => Some(0),
            Term::App(f, a) if matches!(**f, Term::Const(Const::Succ)) => {
                a.as_numeral().map(|n| n + 1)
            }
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Free variables together with their annotated types.
    pub fn free_vars_typed(&self) -> Vec<(Name, Type)> {
        fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Vec<(Name, Type)>) {
            match t {
                Term::Var(x, ty) => {
                    if !bound.contains(x) && !out.iter().any(|(y, _)| y == x) {
                        out.push((x.clone(), ty.clone()));
                    }
                }
                Term::Lam(x, _, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(a, b) | Term::Pair(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Term::Fst(a) | Term::Snd(a) | Term::Check(a) => go(a, bound, out),
                Term::Const(_) | Term::Eps => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x, _) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Fst(a) | Term::Snd(a) | Term::Check(a) => a.collect_free(bound, out),
            Term::Const(_) | Term::Eps => {}
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y, _) => &**y == x,
            Term::Lam(y, _, b) => &**y != x && b.occurs_free(x),
            Term::App(a, b) | Term::Pair(a, b) => a.occurs_free(x) || b.occurs_free(x),
            Term::Fst(a) | Term::Snd(a) | Term::Check(a) => a.occurs_free(x),
            Term::Const(_) | Term::Eps => false,
        }
    }

    /// All binder names and free variable names, for fresh-name generation.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x, _) => {
                out.insert(x.clone());
            }
            Term::Lam(x, _, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Term::Fst(a) | Term::Snd(a) | Term::Check(a) => a.all_names(out),
            Term::Const(_) | Term::Eps => {}
        }
    }

    /// Capture-free substitution `self[x := s]`. Binders that would capture
    /// a free variable of `s` are renamed.
    pub fn subst(&self, x: &str, s: &Term) -> Term {
        let fv = s.free_vars();
        self.subst_with(x, s, &fv)
    }

    fn subst_with(&self, x: &str, s: &Term, fv: &BTreeSet<Name>) -> Term {
        match self {
            Term::Var(y, _) => {
                if &**y == x {
                    s.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(y, ty, b) => {
                if &**y == x || !b.occurs_free(x) {
                    return self.clone();
                }
                if fv.contains(y) {
                    let mut avoid = fv.clone();
                    b.all_names(&mut avoid);
                    avoid.insert(Name::from(x));
                    let y2 = fresh_variant(y, &avoid);
                    let renamed = b.subst(y, &Term::Var(y2.clone(), ty.clone()));
                    Term::Lam(y2, ty.clone(), Arc::new(renamed.subst_with(x, s, fv)))
                } else {
                    Term::Lam(y.clone(), ty.clone(), Arc::new(b.subst_with(x, s, fv)))
                }
            }
            Term::App(a, b) => Term::app(a.subst_with(x, s, fv), b.subst_with(x, s, fv)),
            Term::Pair(a, b) => Term::pair(a.subst_with(x, s, fv), b.subst_with(x, s, fv)),
            Term::Fst(a) => Term::fst(a.subst_with(x, s, fv)),
            Term::Snd(a) => Term::snd(a.subst_with(x, s, fv)),
            Term::Check(a) => Term::check(a.subst_with(x, s, fv)),
            Term::Const(_) | Term::Eps => self.clone(),
        }
    }

    /// Substitution that lets binders of `self` capture free variables of
    /// `s`. This is hole filling for definition contexts.
    pub fn subst_capturing(&self, x: &str, s: &Term) -> Term {
        match self {
            Term::Var(y, _) => {
                if &**y == x {
                    s.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(y, ty, b) => {
                if &**y == x {
                    self.clone()
                } else {
                    Term::Lam(y.clone(), ty.clone(), Arc::new(b.subst_capturing(x, s)))
                }
            }
            Term::App(a, b) => Term::app(a.subst_capturing(x, s), b.subst_capturing(x, s)),
            Term::Pair(a, b) => Term::pair(a.subst_capturing(x, s), b.subst_capturing(x, s)),
            Term::Fst(a) => Term::fst(a.subst_capturing(x, s)),
            Term::Snd(a) => Term::snd(a.subst_capturing(x, s)),
            Term::Check(a) => Term::check(a.subst_capturing(x, s)),
            Term::Const(_) | Term::Eps => self.clone(),
        }
    }

    /// Replace the hole type in every annotation.
    pub fn fill_hole_type(&self, ty: &Type) -> Term {
        match self {
            Term::Var(x, t) => Term::Var(x.clone(), t.fill_hole(ty)),
            Term::Lam(x, t, b) => {
                Term::Lam(x.clone(), t.fill_hole(ty), Arc::new(b.fill_hole_type(ty)))
            }
            Term::App(a, b) => Term::app(a.fill_hole_type(ty), b.fill_hole_type(ty)),
            Term::Pair(a, b) => Term::pair(a.fill_hole_type(ty), b.fill_hole_type(ty)),
            Term::Fst(a) => Term::fst(a.fill_hole_type(ty)),
            Term::Snd(a) => Term::snd(a.fill_hole_type(ty)),
            Term::Check(a) => Term::check(a.fill_hole_type(ty)),
            Term::Const(c) => Term::Const(match c {
                Const::If(s) => Const::If(s.fill_hole(ty)),
                Const::Rec(s) => Const::Rec(s.fill_hole(ty)),
                Const::MarkCase(s) => Const::MarkCase(s.fill_hole(ty)),
                other => other.clone(),
            }),
            Term::Eps => Term::Eps,
        }
    }

    /// Syntax-tree node count. Nulltype terms count zero.
    pub fn size(&self) -> usize {
        match self {
            Term::Eps => 0,
            Term::Var(..) | Term::Const(_) => 1,
            Term::Lam(_, _, b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::Fst(a) | Term::Snd(a) | Term::Check(a) => 1 + a.size(),
        }
    }

    pub fn count_checks(&self) -> usize {
        match self {
            Term::Check(a) => 1 + a.count_checks(),
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) => b.count_checks(),
            Term::App(a, b) | Term::Pair(a, b) => a.count_checks() + b.count_checks(),
            Term::Var(..) | Term::Const(_) | Term::Eps => 0,
        }
    }

    pub fn count_occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y, _) => usize::from(&**y == x),
            Term::Lam(y, _, b) => {
                if &**y == x {
                    0
                } else {
                    b.count_occurrences(x)
                }
            }
            Term::App(a, b) | Term::Pair(a, b) => a.count_occurrences(x) + b.count_occurrences(x),
            Term::Fst(a) | Term::Snd(a) | Term::Check(a) => a.count_occurrences(x),
            Term::Const(_) | Term::Eps => 0,
        }
    }

    /// Number of syntactic occurrences of `sub` inside `self`.
    pub fn count_subterm(&self, sub: &Term) -> usize {
        if self == sub {
            return 1;
        }
        match self {
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) | Term::Check(b) => {
                b.count_subterm(sub)
            }
            Term::App(a, b) | Term::Pair(a, b) => a.count_subterm(sub) + b.count_subterm(sub),
            Term::Var(..) | Term::Const(_) | Term::Eps => 0,
        }
    }

    pub fn count_rec_nodes(&self) -> usize {
        match self {
            Term::Const(Const::Rec(_)) => 1,
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) | Term::Check(b) => {
                b.count_rec_nodes()
            }
            Term::App(a, b) | Term::Pair(a, b) => a.count_rec_nodes() + b.count_rec_nodes(),
            Term::Var(..) | Term::Const(_) | Term::Eps => 0,
        }
    }

    /// Remove all check tags.
    pub fn untagged(&self) -> Term {
        match self {
            Term::Check(a) => a.untagged(),
            Term::Lam(x, t, b) => Term::Lam(x.clone(), t.clone(), Arc::new(b.untagged())),
            Term::App(a, b) => Term::app(a.untagged(), b.untagged()),
            Term::Pair(a, b) => Term::pair(a.untagged(), b.untagged()),
            Term::Fst(a) => Term::fst(a.untagged()),
            Term::Snd(a) => Term::snd(a.untagged()),
            Term::Var(..) | Term::Const(_) | Term::Eps => self.clone(),
        }
    }
}

/// `x`, `x'`, `x''`, ... choosing the first name not in `avoid`.
pub fn fresh_variant(x: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{x}'");
    while avoid.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    Name::from(candidate)
}

/// Alpha-equivalence. Free variables must agree by name and type.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, ea: &mut Vec<&'a str>, eb: &mut Vec<&'a str>) -> bool {
        match (a, b) {
            (Term::Var(x, tx), Term::Var(y, ty)) => {
                let ix = ea.iter().rposition(|n| *n == &**x);
                let iy = eb.iter().rposition(|n| *n == &**y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y && tx == ty,
                    _ => false,
                }
            }
            (Term::Lam(x, tx, ba), Term::Lam(y, ty, bb)) => {
                if tx != ty {
                    return false;
                }
                ea.push(x);
                eb.push(y);
                let r = go(ba, bb, ea, eb);
                ea.pop();
                eb.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                go(f1, f2, ea, eb) && go(a1, a2, ea, eb)
            }
            (Term::Fst(x), Term::Fst(y))
            | (Term::Snd(x), Term::Snd(y))
            | (Term::Check(x), Term::Check(y)) => go(x, y, ea, eb),
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Eps, Term::Eps) => true,
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// A term of the given type: `ff`, `0`, `bot`, pairs and constant
/// functions of those. A type variable `a` yields the free variable
/// `default_a`, to be bound by the model.
pub fn canonical_inhabitant(ty: &Type) -> Term {
    match ty {
        Type::Bool => Term::ff(),
        Type::Nat => Term::zero(),
        Type::Mark => Term::mark_bot(),
        Type::Epsilon => Term::Eps,
        Type::Prod(a, b) => Term::pair(canonical_inhabitant(a), canonical_inhabitant(b)),
        Type::Arrow(a, b) => Term::lam("_", (**a).clone(), canonical_inhabitant(b)),
        Type::Var(a) => Term::var(default_var_name(a), ty.clone()),
        Type::Hole => Term::var("default_hole", Type::Hole),
    }
}

pub fn default_var_name(tvar: &str) -> String {
    format!("default_{tvar}")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Term::Var(x, _) => write!(f, "{x}"),
            Term::Lam(x, ty, b) => write!(f, "(lam ({x} {ty}) {b})"),
            Term::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Term::Fst(a) => write!(f, "(fst {a})"),
            Term::Snd(a) => write!(f, "(snd {a})"),
            Term::Check(a) => write!(f, "(check {a})"),
            Term::Eps => write!(f, "eps"),
            Term::Const(c) => match c {
                Const::Tt => write!(f, "tt"),
                Const::Ff => write!(f, "ff"),
                Const::Zero => write!(f, "0"),
                Const::Succ => write!(f, "succ"),
                Const::MarkTt => write!(f, "mtt"),
                Const::MarkFf => write!(f, "mff"),
                Const::MarkBot => write!(f, "mbot"),
                Const::MarkEq => write!(f, "meq"),
                Const::If(s) => write!(f, "(if-const {s})"),
                Const::Rec(s) => write!(f, "(rec-const {s})"),
                Const::MarkCase(s) => write!(f, "(mcase-const {s})"),
            },
            Term::App(..) => {
                let (head, args) = self.spine();
                let keyword = match head {
                    Term::Const(Const::If(_)) => Some("if"),
                    Term::Const(Const::Rec(_)) => Some("rec"),
                    Term::Const(Const::MarkCase(_)) => Some("mcase"),
                    _ => None,
                };
                match (keyword, head) {
                    (Some(kw), Term::Const(c)) if args.len() >= c.arity() => {
                        let n = c.arity();
                        for _ in n..args.len() {
                            write!(f, "(")?;
                        }
                        write!(f, "({kw}")?;
                        for a in &args[..n] {
                            write!(f, " {a}")?;
                        }
                        write!(f, ")")?;
                        for a in &args[n..] {
                            write!(f, " {a})")?;
                        }
                        Ok(())
                    }
                    _ => {
                        write!(f, "({head}")?;
                        for a in args {
                            write!(f, " {a}")?;
                        }
                        write!(f, ")")
                    }
                }
            }
        }
    }
}
