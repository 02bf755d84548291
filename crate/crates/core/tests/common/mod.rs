#![allow(dead_code)]

use naw::kernel::{Name, Term, Type};
use naw::logic::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_TERM_SIZE: usize = 40;

/// Seeded generator of types, well-typed terms and formulas.
pub struct Gen {
    pub rng: ChaCha8Rng,
    next: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            next: 0,
        }
    }

    fn fresh(&mut self, base: &str) -> Name {
        self.next += 1;
        Name::from(format!("{base}{}", self.next))
    }

    fn base_ty(&mut self) -> Type {
        match self.rng.gen_range(0..3) {
            0 => Type::Bool,
            1 => Type::Nat,
            _ => Type::Mark,
        }
    }

    /// A type without nulltype, at most `depth` constructors deep.
    pub fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.6) {
            return self.base_ty();
        }
        let (a, b) = (self.ty(depth - 1), self.ty(depth - 1));
        if self.rng.gen_bool(0.5) {
            Type::arrow(a, b)
        } else {
            Type::prod(a, b)
        }
    }

    /// A type in which `eps` occurs frequently.
    pub fn ty_eps(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.35) {
                Type::Epsilon
            } else {
                self.base_ty()
            };
        }
        let (a, b) = (self.ty_eps(depth - 1), self.ty_eps(depth - 1));
        if self.rng.gen_bool(0.5) {
            Type::arrow(a, b)
        } else {
            Type::prod(a, b)
        }
    }

    /// Free variables available to generated terms.
    pub fn globals() -> Vec<(Name, Type)> {
        vec![
            (Name::from("x"), Type::Nat),
            (Name::from("b"), Type::Bool),
            (Name::from("g"), Type::arrow(Type::Nat, Type::Nat)),
        ]
    }

    /// A well-typed term of type `ty` with size at most [`MAX_TERM_SIZE`].
    pub fn term_of(&mut self, ty: &Type) -> Term {
        loop {
            let mut ctx = Self::globals();
            let fuel = self.rng.gen_range(2..24);
            let t = self.term(ty, &mut ctx, fuel);
            if t.size() <= MAX_TERM_SIZE {
                return t;
            }
        }
    }

    /// A random type and a term of it.
    pub fn typed_term(&mut self) -> (Term, Type) {
        let ty = self.ty(2);
        (self.term_of(&ty), ty)
    }

    fn var_of(&mut self, ty: &Type, ctx: &[(Name, Type)]) -> Option<Term> {
        let hits: Vec<&(Name, Type)> = ctx.iter().filter(|(_, t)| t == ty).collect();
        if hits.is_empty() {
            return None;
        }
        let (x, t) = hits[self.rng.gen_range(0..hits.len())];
        Some(Term::Var(x.clone(), t.clone()))
    }

    fn intro(&mut self, ty: &Type, ctx: &mut Vec<(Name, Type)>, fuel: usize) -> Term {
        match ty {
            Type::Bool => match self.rng.gen_range(0..3) {
                0 => Term::tt(),
                1 => Term::ff(),
                _ if fuel > 1 => {
                    let a = self.term(&Type::Mark, ctx, fuel / 2);
                    let b = self.term(&Type::Mark, ctx, fuel / 2);
                    Term::mark_eq(a, b)
                }
                _ => Term::tt(),
            },
            Type::Nat => {
                if fuel > 1 && self.rng.gen_bool(0.4) {
                    Term::succ(self.term(&Type::Nat, ctx, fuel - 1))
                } else {
                    Term::numeral(self.rng.gen_range(0..3))
                }
            }
            Type::Mark => match self.rng.gen_range(0..3) {
                0 => Term::mark_tt(),
                1 => Term::mark_ff(),
                _ => Term::mark_bot(),
            },
            Type::Arrow(a, b) => {
                let x = self.fresh("v");
                ctx.push((x.clone(), (**a).clone()));
                let body = self.term(b, ctx, fuel.saturating_sub(1));
                ctx.pop();
                Term::Lam(x, (**a).clone(), body.into())
            }
            Type::Prod(a, b) => {
                let half = fuel.saturating_sub(1) / 2;
                Term::pair(self.term(a, ctx, half), self.term(b, ctx, half))
            }
            other => panic!("no generator for {other}"),
        }
    }

    pub fn term(&mut self, ty: &Type, ctx: &mut Vec<(Name, Type)>, fuel: usize) -> Term {
        if fuel <= 1 {
            if self.rng.gen_bool(0.5) {
                if let Some(v) = self.var_of(ty, ctx) {
                    return v;
                }
            }
            return self.intro(ty, ctx, 0);
        }
        let f = fuel - 1;
        match self.rng.gen_range(0..10) {
            0 | 1 => self
                .var_of(ty, ctx)
                .unwrap_or_else(|| self.intro(ty, ctx, f)),
            2..=4 => self.intro(ty, ctx, f),
            5 => {
                let a = self.ty(1);
                let fun = self.term(&Type::arrow(a.clone(), ty.clone()), ctx, f / 2);
                let arg = self.term(&a, ctx, f / 2);
                Term::app(fun, arg)
            }
            6 => {
                let other = self.ty(1);
                if self.rng.gen_bool(0.5) {
                    Term::fst(self.term(&Type::prod(ty.clone(), other), ctx, f))
                } else {
                    Term::snd(self.term(&Type::prod(other, ty.clone()), ctx, f))
                }
            }
            7 => {
                let c = self.term(&Type::Bool, ctx, f / 3);
                let x = self.term(ty, ctx, f / 3);
                let y = self.term(ty, ctx, f / 3);
                Term::ite(ty.clone(), c, x, y)
            }
            8 => {
                let n = self.term(&Type::Nat, ctx, f / 4);
                let base = self.term(ty, ctx, f / 3);
                let (k, p) = (self.fresh("n"), self.fresh("p"));
                ctx.push((k.clone(), Type::Nat));
                ctx.push((p.clone(), ty.clone()));
                let body = self.term(ty, ctx, f / 3);
                ctx.pop();
                ctx.pop();
                let step = Term::lam(k, Type::Nat, Term::lam(p, ty.clone(), body));
                Term::rec(ty.clone(), n, base, step)
            }
            _ => {
                let m = self.term(&Type::Mark, ctx, f / 4);
                let a = self.term(ty, ctx, f / 4);
                let b = self.term(ty, ctx, f / 4);
                let c = self.term(ty, ctx, f / 4);
                Term::mark_case(ty.clone(), m, a, b, c)
            }
        }
    }

    /// A formula of depth at most `depth` over the globals.
    pub fn formula(&mut self, depth: usize) -> Formula {
        let mut ctx = Self::globals();
        self.formula_in(depth, &mut ctx)
    }

    fn formula_in(&mut self, depth: usize, ctx: &mut Vec<(Name, Type)>) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            let fuel = self.rng.gen_range(1..6);
            return Formula::atom(self.term(&Type::Bool, ctx, fuel));
        }
        if self.rng.gen_bool(0.5) {
            let a = self.formula_in(depth - 1, ctx);
            let b = self.formula_in(depth - 1, ctx);
            Formula::implies(a, b)
        } else {
            let x = self.fresh("q");
            let ty = if self.rng.gen_bool(0.7) {
                Type::Nat
            } else {
                Type::Bool
            };
            ctx.push((x.clone(), ty.clone()));
            let body = self.formula_in(depth - 1, ctx);
            ctx.pop();
            Formula::forall(x, ty, body)
        }
    }
}

/// Subject reduction along the leftmost-outermost path, idempotence of
/// normalization and agreement of both strategies.
pub fn kernel_health(t: &Term, ty: &Type) -> Result<(), String> {
    use naw::kernel::{
        alpha_eq, is_normal, normalize, normalize_with, reduce_step, type_of, Strategy,
        DEFAULT_FUEL,
    };
    let got = type_of(t).map_err(|e| format!("{t}: {e}"))?;
    if &got != ty {
        return Err(format!("{t}: generated at {ty}, typed {got}"));
    }
    let mut cur = t.clone();
    while let Some(next) = reduce_step(&cur) {
        let nty = type_of(&next).map_err(|e| format!("{cur} -> {next}: {e}"))?;
        if &nty != ty {
            return Err(format!("{cur} -> {next}: type {ty} became {nty}"));
        }
        cur = next;
    }
    let nf = normalize(t).map_err(|e| e.to_string())?;
    if !alpha_eq(&nf, &cur) || !is_normal(&nf) {
        return Err(format!("{t}: normal form unstable"));
    }
    let again = normalize(&nf).map_err(|e| e.to_string())?;
    if again != nf {
        return Err(format!("{t}: normalization not idempotent"));
    }
    let inner =
        normalize_with(t, Strategy::RightmostInnermost, DEFAULT_FUEL).map_err(|e| e.to_string())?;
    if !alpha_eq(&inner, &nf) {
        return Err(format!("{t}: strategies disagree: {nf} vs {inner}"));
    }
    Ok(())
}

/// Congruence of type simplification, and that erasing a term of type `ty`
/// yields a term of the simplified type.
pub fn epsilon_congruence(ty: &Type, other: &Type) -> Result<(), String> {
    use naw::kernel::{
        canonical_inhabitant, epsilon_simplify_term, epsilon_simplify_type as s, type_of,
    };
    let (sa, sb) = (s(ty), s(other));
    if s(&sa) != sa {
        return Err(format!("{ty}: simplification not idempotent"));
    }
    if sa.contains_epsilon() && !sa.is_epsilon() {
        return Err(format!("{ty}: residual eps in {sa}"));
    }
    for (raw, cong) in [
        (
            Type::arrow(ty.clone(), other.clone()),
            Type::arrow(sa.clone(), sb.clone()),
        ),
        (
            Type::prod(ty.clone(), other.clone()),
            Type::prod(sa.clone(), sb.clone()),
        ),
        (
            Type::arrow(other.clone(), ty.clone()),
            Type::arrow(sb.clone(), sa.clone()),
        ),
    ] {
        if s(&raw) != s(&cong) {
            return Err(format!("{raw}: {} vs {}", s(&raw), s(&cong)));
        }
    }
    let terms = [
        Term::var("z", ty.clone()),
        canonical_inhabitant(ty),
        Term::lam("w", other.clone(), Term::var("z", ty.clone())),
        Term::pair(Term::var("z", ty.clone()), canonical_inhabitant(other)),
        Term::fst(Term::pair(
            Term::var("z", ty.clone()),
            Term::var("z2", other.clone()),
        )),
    ];
    for t in &terms {
        let raw = type_of(t).map_err(|e| format!("{t}: {e}"))?;
        let e = epsilon_simplify_term(t).map_err(|e| format!("{t}: {e}"))?;
        let want = s(&raw);
        if want.is_epsilon() {
            if e != Term::Eps {
                return Err(format!("{t}: nulltype term erased to {e}"));
            }
        } else {
            let got = type_of(&e).map_err(|err| format!("{e}: {err}"))?;
            if got != want {
                return Err(format!("{t}: erased type {got}, expected {want}"));
            }
        }
    }
    Ok(())
}

pub mod criteria;
