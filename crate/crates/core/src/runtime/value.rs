use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kernel::{Const, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Tt,
    Ff,
    Bot,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Tt => "mtt",
            Mark::Ff => "mff",
            Mark::Bot => "mbot",
        })
    }
}

/// Fully evaluated first-order data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ground {
    Bool(bool),
    Nat(u64),
    Mark(Mark),
    Pair(Box<Ground>, Box<Ground>),
    Eps,
}

impl Ground {
    pub fn pair(a: Ground, b: Ground) -> Ground {
        Ground::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Ground::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Ground::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Ground::Bool(b) => Value::Bool(*b),
            Ground::Nat(n) => Value::Nat(*n),
            Ground::Mark(m) => Value::Mark(*m),
            Ground::Eps => Value::Eps,
            Ground::Pair(a, b) => Value::Pair(Thunk::done(a.to_value()), Thunk::done(b.to_value())),
        }
    }
}

impl fmt::Display for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ground::Bool(true) => f.write_str("tt"),
            Ground::Bool(false) => f.write_str("ff"),
            Ground::Nat(n) => write!(f, "{n}"),
            Ground::Mark(m) => write!(f, "{m}"),
            Ground::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Ground::Eps => f.write_str("eps"),
        }
    }
}

/// A finite function given by data rather than by a term.
#[derive(Clone, Debug)]
pub enum Table {
    /// Lookup on a first-order argument; unlisted arguments map to `default`.
    Ground {
        entries: Vec<(Ground, Value)>,
        default: Box<Value>,
    },
    /// `g |-> then (g at)` for a functional argument `g`.
    Probe { at: Box<Value>, then: Box<Value> },
    /// `p |-> then (fst p)`, or `snd` when `right`.
    Project { right: bool, then: Box<Value> },
}

impl Table {
    /// Nat-indexed table, constant beyond its last entry.
    pub fn nat_list(values: Vec<Value>) -> Table {
        let default = values.last().cloned().unwrap_or(Value::Eps);
        Table::Ground {
            entries: values
                .into_iter()
                .enumerate()
                .map(|(i, v)| (Ground::Nat(i as u64), v))
                .collect(),
            default: Box::new(default),
        }
    }
}

pub type Env = Option<Rc<EnvNode>>;

#[derive(Debug)]
pub struct EnvNode {
    pub name: Name,
    pub thunk: Thunk,
    pub next: Env,
}

pub fn extend(env: &Env, name: Name, thunk: Thunk) -> Env {
    Some(Rc::new(EnvNode {
        name,
        thunk,
        next: env.clone(),
    }))
}

pub fn lookup(env: &Env, x: &str) -> Option<Thunk> {
    let mut cur = env.as_ref();
    while let Some(node) = cur {
        if &*node.name == x {
            return Some(node.thunk.clone());
        }
        cur = node.next.as_ref();
    }
    None
}

/// Weak head normal forms.
#[derive(Clone, Debug)]
pub enum Value {
    Bool(bool),
    Nat(u64),
    Mark(Mark),
    Eps,
    Pair(Thunk, Thunk),
    Closure(Name, Arc<Term>, Env),
    /// A constant waiting for more arguments.
    Partial(Const, Vec<Thunk>),
    Table(Rc<Table>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Thunk::done(a), Thunk::done(b))
    }

    pub fn table(t: Table) -> Value {
        Value::Table(Rc::new(t))
    }
}

#[derive(Debug)]
pub(crate) enum ThunkState {
    Pending(Term, Env),
    /// `Rec k s t` with `s`, `t` already shared.
    Rec(u64, Thunk, Thunk),
    Forcing,
    Done(Value),
}

#[derive(Clone, Debug)]
pub struct Thunk(pub(crate) Rc<RefCell<ThunkState>>);

impl Thunk {
    pub fn done(v: Value) -> Thunk {
        Thunk(Rc::new(RefCell::new(ThunkState::Done(v))))
    }

    pub(crate) fn pending(t: Term, env: Env) -> Thunk {
        Thunk(Rc::new(RefCell::new(ThunkState::Pending(t, env))))
    }

    pub(crate) fn rec(k: u64, s: Thunk, t: Thunk) -> Thunk {
        Thunk(Rc::new(RefCell::new(ThunkState::Rec(k, s, t))))
    }
}

/// Serializable form of data values (no closures).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueRepr {
    Data(Ground),
    Pair(Box<ValueRepr>, Box<ValueRepr>),
    Table {
        entries: Vec<(Ground, ValueRepr)>,
        default: Box<ValueRepr>,
    },
    Probe {
        at: Box<ValueRepr>,
        then: Box<ValueRepr>,
    },
    Project {
        right: bool,
        then: Box<ValueRepr>,
    },
}

impl ValueRepr {
    /// `None` for closures and unevaluated components.
    pub fn of(v: &Value) -> Option<ValueRepr> {
        Some(match v {
            Value::Bool(b) => ValueRepr::Data(Ground::Bool(*b)),
            Value::Nat(n) => ValueRepr::Data(Ground::Nat(*n)),
            Value::Mark(m) => ValueRepr::Data(Ground::Mark(*m)),
            Value::Eps => ValueRepr::Data(Ground::Eps),
            Value::Pair(a, b) => {
                let get = |t: &Thunk| match &*t.0.borrow() {
                    ThunkState::Done(v) => ValueRepr::of(v),
                    _ => None,
                };
                ValueRepr::Pair(Box::new(get(a)?), Box::new(get(b)?))
            }
            Value::Table(t) => match &**t {
                Table::Ground { entries, default } => ValueRepr::Table {
                    entries: entries
                        .iter()
                        .map(|(k, v)| Some((k.clone(), ValueRepr::of(v)?)))
                        .collect::<Option<_>>()?,
                    default: Box::new(ValueRepr::of(default)?),
                },
                Table::Probe { at, then } => ValueRepr::Probe {
                    at: Box::new(ValueRepr::of(at)?),
                    then: Box::new(ValueRepr::of(then)?),
                },
                Table::Project { right, then } => ValueRepr::Project {
                    right: *right,
                    then: Box::new(ValueRepr::of(then)?),
                },
            },
            Value::Closure(..) | Value::Partial(..) => return None,
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            ValueRepr::Data(g) => g.to_value(),
            ValueRepr::Pair(a, b) => Value::pair(a.to_value(), b.to_value()),
            ValueRepr::Table { entries, default } => Value::table(Table::Ground {
                entries: entries
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_value()))
                    .collect(),
                default: Box::new(default.to_value()),
            }),
            ValueRepr::Probe { at, then } => Value::table(Table::Probe {
                at: Box::new(at.to_value()),
                then: Box::new(then.to_value()),
            }),
            ValueRepr::Project { right, then } => Value::table(Table::Project {
                right: *right,
                then: Box::new(then.to_value()),
            }),
        }
    }
}

impl fmt::Display for ValueRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRepr::Data(g) => write!(f, "{g}"),
            ValueRepr::Pair(a, b) => write!(f, "(pair {a} {b})"),
            ValueRepr::Table { entries, default } => {
                f.write_str("{")?;
                for (k, v) in entries {
                    write!(f, "{k}:{v} ")?;
                }
                write!(f, "_:{default}}}")
            }
            ValueRepr::Probe { at, then } => write!(f, "(probe {at} {then})"),
            ValueRepr::Project { right, then } => {
                write!(f, "({} {then})", if *right { "on-snd" } else { "on-fst" })
            }
        }
    }
}
