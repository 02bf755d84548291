use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::value::{extend, lookup, Env, Ground, Mark, Table, Thunk, ThunkState, Value};
use super::EvalError;
use crate::kernel::{Const, Name, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instrumentation {
    pub rec_unfolds: u64,
    pub tc_checks: u64,
    pub beta_steps: u64,
    pub total_steps: u64,
}

impl Add for Instrumentation {
    type Output = Instrumentation;
    fn add(mut self, o: Instrumentation) -> Instrumentation {
        self += o;
        self
    }
}

impl AddAssign for Instrumentation {
    fn add_assign(&mut self, o: Instrumentation) {
        self.rec_unfolds += o.rec_unfolds;
        self.tc_checks += o.tc_checks;
        self.beta_steps += o.beta_steps;
        self.total_steps += o.total_steps;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalStrategy {
    /// Arguments and let-bound definitions are evaluated at most once.
    #[default]
    CallByNeed,
    /// No sharing; every use re-evaluates.
    CallByName,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub strategy: EvalStrategy,
    pub fuel: u64,
    pub count_tc: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            strategy: EvalStrategy::CallByNeed,
            fuel: 50_000_000,
            count_tc: true,
        }
    }
}

/// Lazy evaluator for extracted terms. Conditionals and marker cases force
/// one branch only; pairs are forced componentwise on projection.
pub struct Evaluator {
    pub cfg: EvalConfig,
    pub stats: Instrumentation,
}

impl Evaluator {
    pub fn new(cfg: EvalConfig) -> Self {
        Evaluator {
            cfg,
            stats: Instrumentation::default(),
        }
    }

    /// Environment binding free variables to given values.
    pub fn env_of(bindings: &BTreeMap<Name, Value>) -> Env {
        bindings.iter().fold(None, |env, (x, v)| {
            extend(&env, x.clone(), Thunk::done(v.clone()))
        })
    }

    pub fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, EvalError> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.eval_inner(t, env))
    }

    /// Evaluates `t` applied to `args` and forces the result completely.
    pub fn run(&mut self, t: &Term, args: &[Value], env: &Env) -> Result<Ground, EvalError> {
        let mut v = self.eval(t, env)?;
        for a in args {
            v = self.apply(v, Thunk::done(a.clone()))?;
        }
        self.ground(v)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.stats.total_steps += 1;
        if self.stats.total_steps > self.cfg.fuel {
            return Err(EvalError::FuelExhausted(self.cfg.fuel));
        }
        Ok(())
    }

    fn eval_inner(&mut self, t: &Term, env: &Env) -> Result<Value, EvalError> {
        self.tick()?;
        match t {
            Term::Var(x, _) => {
                let th =
                    lookup(env, x).ok_or_else(|| EvalError::UnboundModelVariable(x.clone()))?;
                self.force(&th)
            }
            Term::Lam(x, _, body) => Ok(Value::Closure(x.clone(), body.clone(), env.clone())),
            Term::App(f, a) => {
                let fv = self.eval(f, env)?;
                let arg = self.delay(a, env);
                self.apply(fv, arg)
            }
            Term::Pair(a, b) => Ok(Value::Pair(self.delay(a, env), self.delay(b, env))),
            Term::Fst(p) | Term::Snd(p) => match self.eval(p, env)? {
                Value::Pair(l, r) => {
                    let th = if matches!(t, Term::Fst(_)) { l } else { r };
                    self.force(&th)
                }
                other => Err(EvalError::Stuck(format!(
                    "projection of {}",
                    describe(&other)
                ))),
            },
            Term::Const(c) => Ok(match c {
                Const::Tt => Value::Bool(true),
                Const::Ff => Value::Bool(false),
                Const::Zero => Value::Nat(0),
                Const::MarkTt => Value::Mark(Mark::Tt),
                Const::MarkFf => Value::Mark(Mark::Ff),
                Const::MarkBot => Value::Mark(Mark::Bot),
                c => Value::Partial(c.clone(), Vec::new()),
            }),
            Term::Check(inner) => {
                if self.cfg.count_tc {
                    self.stats.tc_checks += 1;
                }
                self.eval(inner, env)
            }
            Term::Eps => Ok(Value::Eps),
        }
    }

    fn delay(&self, t: &Term, env: &Env) -> Thunk {
        match t {
            Term::Const(Const::Tt) => Thunk::done(Value::Bool(true)),
            Term::Const(Const::Ff) => Thunk::done(Value::Bool(false)),
            Term::Const(Const::Zero) => Thunk::done(Value::Nat(0)),
            Term::Var(x, _) if self.cfg.strategy == EvalStrategy::CallByNeed => {
                lookup(env, x).unwrap_or_else(|| Thunk::pending(t.clone(), env.clone()))
            }
            _ => Thunk::pending(t.clone(), env.clone()),
        }
    }

    pub fn force(&mut self, th: &Thunk) -> Result<Value, EvalError> {
        let state = std::mem::replace(&mut *th.0.borrow_mut(), ThunkState::Forcing);
        let (v, restore) = match state {
            ThunkState::Done(v) => {
                *th.0.borrow_mut() = ThunkState::Done(v.clone());
                return Ok(v);
            }
            ThunkState::Forcing => return Err(EvalError::Stuck("cyclic thunk".into())),
            ThunkState::Pending(t, env) => {
                let v = self.eval(&t, &env);
                (v, ThunkState::Pending(t, env))
            }
            ThunkState::Rec(k, s, st) => {
                let v = self.rec(k, s.clone(), st.clone());
                (v, ThunkState::Rec(k, s, st))
            }
        };
        let v = match v {
            Ok(v) => v,
            Err(e) => {
                *th.0.borrow_mut() = restore;
                return Err(e);
            }
        };
        *th.0.borrow_mut() = match self.cfg.strategy {
            EvalStrategy::CallByNeed => ThunkState::Done(v.clone()),
            EvalStrategy::CallByName => restore,
        };
        Ok(v)
    }

    pub fn apply(&mut self, f: Value, arg: Thunk) -> Result<Value, EvalError> {
        match f {
            Value::Closure(x, body, env) => {
                self.stats.beta_steps += 1;
                let env = extend(&env, x, arg);
                self.eval(&body, &env)
            }
            Value::Partial(c, mut args) => {
                args.push(arg);
                if args.len() < c.arity() {
                    Ok(Value::Partial(c, args))
                } else {
                    self.fire(&c, args)
                }
            }
            Value::Table(tab) => match &*tab {
                Table::Ground { entries, default } => {
                    let v = self.force(&arg)?;
                    let key = self.ground(v)?;
                    Ok(entries
                        .iter()
                        .find(|(k, _)| *k == key)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| (**default).clone()))
                }
                Table::Probe { at, then } => {
                    let g = self.force(&arg)?;
                    let r = self.apply(g, Thunk::done((**at).clone()))?;
                    self.apply((**then).clone(), Thunk::done(r))
                }
                Table::Project { right, then } => match self.force(&arg)? {
                    Value::Pair(l, r) => self.apply((**then).clone(), if *right { r } else { l }),
                    other => Err(EvalError::Stuck(format!(
                        "projection of {}",
                        describe(&other)
                    ))),
                },
            },
            other => Err(EvalError::Stuck(format!(
                "application of {}",
                describe(&other)
            ))),
        }
    }

    fn fire(&mut self, c: &Const, args: Vec<Thunk>) -> Result<Value, EvalError> {
        match c {
            Const::Succ => match self.force(&args[0])? {
                Value::Nat(n) => Ok(Value::Nat(n + 1)),
                other => Err(EvalError::Stuck(format!("succ of {}", describe(&other)))),
            },
            Const::If(_) => match self.force(&args[0])? {
                Value::Bool(true) => self.force(&args[1]),
                Value::Bool(false) => self.force(&args[2]),
                other => Err(EvalError::Stuck(format!("if on {}", describe(&other)))),
            },
            Const::Rec(_) => match self.force(&args[0])? {
                Value::Nat(k) => self.rec(k, args[1].clone(), args[2].clone()),
                other => Err(EvalError::Stuck(format!("rec on {}", describe(&other)))),
            },
            Const::MarkCase(_) => match self.force(&args[0])? {
                Value::Mark(Mark::Tt) => self.force(&args[1]),
                Value::Mark(Mark::Ff) => self.force(&args[2]),
                Value::Mark(Mark::Bot) => self.force(&args[3]),
                other => Err(EvalError::Stuck(format!(
                    "mark case on {}",
                    describe(&other)
                ))),
            },
            Const::MarkEq => match (self.force(&args[0])?, self.force(&args[1])?) {
                (Value::Mark(a), Value::Mark(b)) => Ok(Value::Bool(a == b)),
                (a, _) => Err(EvalError::Stuck(format!(
                    "mark equality on {}",
                    describe(&a)
                ))),
            },
            _ => unreachable!("constant without arguments"),
        }
    }

    fn rec(&mut self, k: u64, s: Thunk, t: Thunk) -> Result<Value, EvalError> {
        self.tick()?;
        if k == 0 {
            return self.force(&s);
        }
        self.stats.rec_unfolds += 1;
        let prev = Thunk::rec(k - 1, s, t.clone());
        let step = self.force(&t)?;
        let f = self.apply(step, Thunk::done(Value::Nat(k - 1)))?;
        self.apply(f, prev)
    }

    /// Forces a value of first-order type completely.
    pub fn ground(&mut self, v: Value) -> Result<Ground, EvalError> {
        Ok(match v {
            Value::Bool(b) => Ground::Bool(b),
            Value::Nat(n) => Ground::Nat(n),
            Value::Mark(m) => Ground::Mark(m),
            Value::Eps => Ground::Eps,
            Value::Pair(a, b) => {
                let a = self.force(&a)?;
                let a = self.ground(a)?;
                let b = self.force(&b)?;
                let b = self.ground(b)?;
                Ground::pair(a, b)
            }
            other => return Err(EvalError::NotGround(describe(&other))),
        })
    }
}

fn describe(v: &Value) -> String {
    match v {
        Value::Bool(b) => format!("boolean {b}"),
        Value::Nat(n) => format!("number {n}"),
        Value::Mark(m) => format!("marker {m}"),
        Value::Eps => "eps".into(),
        Value::Pair(..) => "a pair".into(),
        Value::Closure(..) | Value::Partial(..) | Value::Table(..) => "a function".into(),
    }
}

/// One-shot evaluation of a closed (up to `bindings`) term to ground data.
pub fn evaluate(
    t: &Term,
    bindings: &BTreeMap<Name, Value>,
    cfg: EvalConfig,
) -> Result<(Ground, Instrumentation), EvalError> {
    let mut ev = Evaluator::new(cfg);
    let env = Evaluator::env_of(bindings);
    let g = ev.run(t, &[], &env)?;
    Ok((g, ev.stats))
}
