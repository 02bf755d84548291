use std::collections::BTreeMap;

use super::{KernelError, Name, Term, Type};

/// Types of the free object variables of a term, keyed by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingContext {
    vars: BTreeMap<Name, Type>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a binding. Rebinding a name to a different type is rejected.
    pub fn insert(&mut self, name: impl Into<Name>, ty: Type) -> Result<(), KernelError> {
        let name = name.into();
        match self.vars.get(&name) {
            Some(old) if *old != ty => Err(KernelError::DuplicateVariable(name)),
            _ => {
                self.vars.insert(name, ty);
                Ok(())
            }
        }
    }

    pub fn with(mut self, name: impl Into<Name>, ty: Type) -> Self {
        self.vars.insert(name.into(), ty);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.vars.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.vars.iter()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn extend_from(&mut self, other: &TypingContext) {
        for (k, v) in &other.vars {
            self.vars.insert(k.clone(), v.clone());
        }
    }
}

impl FromIterator<(Name, Type)> for TypingContext {
    fn from_iter<I: IntoIterator<Item = (Name, Type)>>(iter: I) -> Self {
        TypingContext {
            vars: iter.into_iter().collect(),
        }
    }
}

/// Type checking with every free variable required in `ctx`.
pub fn infer_type(t: &Term, ctx: &TypingContext) -> Result<Type, KernelError> {
    infer(t, &mut Vec::new(), Some(ctx))
}

/// Type synthesis trusting the annotations of free variables.
pub fn type_of(t: &Term) -> Result<Type, KernelError> {
    infer(t, &mut Vec::new(), None)
}

fn mismatch(location: &str, expected: impl ToString, found: impl ToString) -> KernelError {
    KernelError::TypeMismatch {
        location: location.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn infer(
    t: &Term,
    bound: &mut Vec<(Name, Type)>,
    ctx: Option<&TypingContext>,
) -> Result<Type, KernelError> {
    match t {
        Term::Var(x, ann) => {
            let found = bound
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, ty)| ty.clone());
            let ty = match (found, ctx) {
                (Some(ty), _) => ty,
                (None, Some(ctx)) => ctx
                    .get(x)
                    .cloned()
                    .ok_or_else(|| KernelError::UnboundVariable(x.clone()))?,
                (None, None) => ann.clone(),
            };
            if ty != *ann {
                return Err(mismatch(&format!("variable {x}"), &ty, ann));
            }
            Ok(ty)
        }
        Term::Lam(x, ty, body) => {
            bound.push((x.clone(), ty.clone()));
            let cod = infer(body, bound, ctx);
            bound.pop();
            Ok(Type::arrow(ty.clone(), cod?))
        }
        Term::App(f, a) => {
            let tf = infer(f, bound, ctx)?;
            let ta = infer(a, bound, ctx)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok((*cod).clone())
                    } else {
                        Err(mismatch(&format!("argument of {f}"), &dom, &ta))
                    }
                }
                other => Err(mismatch(
                    &format!("head of application {f}"),
                    "function type",
                    &other,
                )),
            }
        }
        Term::Pair(a, b) => Ok(Type::prod(infer(a, bound, ctx)?, infer(b, bound, ctx)?)),
        Term::Fst(p) => match infer(p, bound, ctx)? {
            Type::Prod(l, _) => Ok((*l).clone()),
            other => Err(mismatch(
                &format!("projection of {p}"),
                "product type",
                &other,
            )),
        },
        Term::Snd(p) => match infer(p, bound, ctx)? {
            Type::Prod(_, r) => Ok((*r).clone()),
            other => Err(mismatch(
                &format!("projection of {p}"),
                "product type",
                &other,
            )),
        },
        Term::Const(c) => Ok(c.ty()),
        Term::Check(inner) => infer(inner, bound, ctx),
        Term::Eps => Ok(Type::Epsilon),
    }
}
