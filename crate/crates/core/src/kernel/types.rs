use std::fmt;
use std::sync::Arc;

use super::Name;

/// Object-language types: Gödel's T over `bool`, `nat` and a three-valued
/// marker type, plus the nulltype `eps` and the hole type used by
/// definition contexts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Type {
    Bool,
    Nat,
    Mark,
    Var(Name),
    Arrow(Arc<Type>, Arc<Type>),
    Prod(Arc<Type>, Arc<Type>),
    Epsilon,
    Hole,
}

impl Type {
    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    pub fn prod(left: Type, right: Type) -> Type {
        Type::Prod(Arc::new(left), Arc::new(right))
    }

    /// `a1 => a2 => ... => res`
    pub fn arrows<I>(args: I, res: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(res, |acc, a| Type::arrow(a, acc))
    }

    pub fn var(name: &str) -> Type {
        Type::Var(Name::from(name))
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Type::Epsilon)
    }

    pub fn contains_hole(&self) -> bool {
        match self {
            Type::Hole => true,
            Type::Arrow(a, b) | Type::Prod(a, b) => a.contains_hole() || b.contains_hole(),
            _ => false,
        }
    }

    pub fn contains_epsilon(&self) -> bool {
        match self {
            Type::Epsilon => true,
            Type::Arrow(a, b) | Type::Prod(a, b) => a.contains_epsilon() || b.contains_epsilon(),
            _ => false,
        }
    }

    /// Replace every occurrence of the hole type by `ty`.
    pub fn fill_hole(&self, ty: &Type) -> Type {
        match self {
            Type::Hole => ty.clone(),
            Type::Arrow(a, b) => Type::arrow(a.fill_hole(ty), b.fill_hole(ty)),
            Type::Prod(a, b) => Type::prod(a.fill_hole(ty), b.fill_hole(ty)),
            other => other.clone(),
        }
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_prod(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Prod(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn type_vars(&self, out: &mut Vec<Name>) {
        match self {
            Type::Var(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Type::Arrow(a, b) | Type::Prod(a, b) => {
                a.type_vars(out);
                b.type_vars(out);
            }
            _ => {}
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => write!(f, "bool"),
            Type::Nat => write!(f, "nat"),
            Type::Mark => write!(f, "mark"),
            Type::Var(a) => write!(f, "'{a}"),
            Type::Epsilon => write!(f, "eps"),
            Type::Hole => write!(f, "hole"),
            Type::Prod(a, b) => write!(f, "(* {a} {b})"),
            Type::Arrow(a, b) => {
                write!(f, "(-> {a}")?;
                let mut cod: &Type = b;
                while let Type::Arrow(x, y) = cod {
                    write!(f, " {x}")?;
                    cod = y;
                }
                write!(f, " {cod})")
            }
        }
    }
}
