use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::kernel::{fresh_variant, r_equal, Name, Term, Type};

/// Formulas of the negative fragment: decidable atoms, implication and
/// universal quantification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Term),
    Implies(Arc<Formula>, Arc<Formula>),
    Forall(Name, Type, Arc<Formula>),
}

impl Formula {
    pub fn atom(t: Term) -> Formula {
        Formula::Atom(t)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn forall(x: impl Into<Name>, ty: Type, body: Formula) -> Formula {
        Formula::Forall(x.into(), ty, Arc::new(body))
    }

    /// `F := at(ff)`
    pub fn falsity() -> Formula {
        Formula::Atom(Term::ff())
    }

    pub fn truth() -> Formula {
        Formula::Atom(Term::tt())
    }

    /// `not A := A -> F`
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::falsity())
    }

    /// Weak existence `exc x A := not (all x. not A)`.
    pub fn exc(x: impl Into<Name>, ty: Type, body: Formula) -> Formula {
        Formula::not(Formula::forall(x, ty, Formula::not(body)))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(t) => {
                for x in t.free_vars() {
                    if !bound.contains(&x) {
                        out.insert(x);
                    }
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, _, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables with the types their occurrences are annotated with.
    pub fn free_vars_typed(&self) -> Vec<(Name, Type)> {
        fn go(f: &Formula, bound: &mut Vec<Name>, out: &mut Vec<(Name, Type)>) {
            match f {
                Formula::Atom(t) => {
                    for (x, ty) in t.free_vars_typed() {
                        if !bound.contains(&x) && !out.iter().any(|(y, _)| *y == x) {
                            out.push((x, ty));
                        }
                    }
                }
                Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(x, _, a) => {
                    bound.push(x.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(t) => t.all_names(out),
            Formula::Implies(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Forall(x, _, a) => {
                out.insert(x.clone());
                a.all_names(out);
            }
        }
    }

    /// Capture-free substitution of an object term for a variable.
    pub fn subst(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(s) => Formula::Atom(s.subst(x, t)),
            Formula::Implies(a, b) => Formula::implies(a.subst(x, t), b.subst(x, t)),
            Formula::Forall(y, ty, a) => {
                if &**y == x || !a.free_vars().contains(x) {
                    return self.clone();
                }
                let fv = t.free_vars();
                if fv.contains(y) {
                    let mut avoid = fv;
                    a.all_names(&mut avoid);
                    avoid.insert(Name::from(x));
                    let y2 = fresh_variant(y, &avoid);
                    let renamed = a.subst(y, &Term::Var(y2.clone(), ty.clone()));
                    Formula::forall(y2, ty.clone(), renamed.subst(x, t))
                } else {
                    Formula::forall(y.clone(), ty.clone(), a.subst(x, t))
                }
            }
        }
    }

    /// Node count, including the embedded terms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(t) => 1 + t.size(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, _, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, _, a) => 1 + a.depth(),
        }
    }
}

/// Structural equality up to renaming of bound variables, comparing atoms
/// by `r_equal`.
pub fn formula_eq(a: &Formula, b: &Formula) -> bool {
    match (a, b) {
        (Formula::Atom(s), Formula::Atom(t)) => r_equal(s, t).unwrap_or(false),
        (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            formula_eq(a1, a2) && formula_eq(b1, b2)
        }
        (Formula::Forall(x, tx, a1), Formula::Forall(y, ty, a2)) => {
            if tx != ty {
                return false;
            }
            if x == y {
                return formula_eq(a1, a2);
            }
            let mut avoid = BTreeSet::new();
            a1.all_names(&mut avoid);
            a2.all_names(&mut avoid);
            avoid.insert(x.clone());
            avoid.insert(y.clone());
            let z = Term::Var(fresh_variant(x, &avoid), tx.clone());
            formula_eq(&a1.subst(x, &z), &a2.subst(y, &z))
        }
        _ => false,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(t) => write!(f, "(atom {t})"),
            Formula::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Formula::Forall(x, ty, a) => write!(f, "(all ({x} {ty}) {a})"),
        }
    }
}

/// A formula with a distinguished variable, `A(x)`; the induction formula
/// of the `Cases` and `Ind` axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Motive {
    pub var: Name,
    pub ty: Type,
    pub body: Formula,
}

impl Motive {
    pub fn new(var: impl Into<Name>, ty: Type, body: Formula) -> Self {
        Motive {
            var: var.into(),
            ty,
            body,
        }
    }

    pub fn instantiate(&self, t: &Term) -> Formula {
        self.body.subst(&self.var, t)
    }

    pub fn subst(&self, x: &str, t: &Term) -> Motive {
        if *self.var == *x {
            return self.clone();
        }
        let fv = t.free_vars();
        if fv.contains(&self.var) {
            let mut avoid = fv;
            self.body.all_names(&mut avoid);
            avoid.insert(Name::from(x));
            let v2 = fresh_variant(&self.var, &avoid);
            let body = self
                .body
                .subst(&self.var, &Term::Var(v2.clone(), self.ty.clone()));
            Motive::new(v2, self.ty.clone(), body.subst(x, t))
        } else {
            Motive::new(self.var.clone(), self.ty.clone(), self.body.subst(x, t))
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut fv = self.body.free_vars();
        fv.remove(&self.var);
        fv
    }
}

impl fmt::Display for Motive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.body, self.var)
    }
}
