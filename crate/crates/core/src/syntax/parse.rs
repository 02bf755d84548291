use std::collections::BTreeMap;

use super::sexp::{read_all, Pos, Sexp};
use super::ParseError;
use crate::kernel::{type_of, Const, Name, Term, Type};
use crate::logic::{freshen, mk_efq, mk_stability, Formula, Motive, Proof};

/// A parsed `.naw` file.
#[derive(Clone, Debug, Default)]
pub struct Document {
    /// Declared free object variables.
    pub vars: Vec<(Name, Type)>,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug)]
pub enum Item {
    Proof(Proof),
    Term(Term),
}

impl Document {
    /// The last proof in the file.
    pub fn proof(&self) -> Option<&Proof> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Proof(p) => Some(p),
            Item::Term(_) => None,
        })
    }

    pub fn term(&self) -> Option<&Term> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Term(t) => Some(t),
            Item::Proof(_) => None,
        })
    }
}

const PROOF_HEADS: &[&str] = &[
    "assume",
    "imp-intro",
    "imp-elim",
    "all-intro",
    "all-elim",
    "truth",
    "cases",
    "ind",
    "efq",
    "stab",
];

const RESERVED: &[&str] = &[
    "lam",
    "pair",
    "fst",
    "snd",
    "check",
    "succ",
    "if",
    "rec",
    "mcase",
    "meq",
    "let",
    "tt",
    "ff",
    "mtt",
    "mff",
    "mbot",
    "eps",
    "if-const",
    "rec-const",
    "mcase-const",
];

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    let mut p = Parser::default();
    let mut doc = Document::default();
    for item in read_all(src)? {
        match item.head() {
            Some("var") => {
                let [_, x, ty] = p.fixed::<3>(&item, "(var name type)")?;
                let name = p.binder(x)?;
                let ty = p.ty(ty)?;
                if p.globals.contains_key(&name) || p.defs.contains_key(&*name) {
                    return Err(ParseError::duplicate(&name, x.pos()));
                }
                p.globals.insert(name.clone(), ty.clone());
                doc.vars.push((name, ty));
            }
            Some("def") => {
                let [_, x, t] = p.fixed::<3>(&item, "(def name term)")?;
                let name = p.binder(x)?;
                if p.globals.contains_key(&name) || p.defs.contains_key(&*name) {
                    return Err(ParseError::duplicate(&name, x.pos()));
                }
                let t = p.term(t)?;
                p.defs.insert(name.to_string(), t);
            }
            Some("formula") => {
                let [_, x, a] = p.fixed::<3>(&item, "(formula name formula)")?;
                let name = p.binder(x)?;
                if p.formulas.contains_key(&*name) {
                    return Err(ParseError::duplicate(&name, x.pos()));
                }
                let a = p.formula(a)?;
                p.formulas.insert(name.to_string(), a);
            }
            Some("proof") => {
                let [_, m] = p.fixed::<2>(&item, "(proof P)")?;
                doc.items.push(Item::Proof(freshen(&p.proof(m)?)));
            }
            Some("term") => {
                let [_, t] = p.fixed::<2>(&item, "(term t)")?;
                doc.items.push(Item::Term(p.term(t)?));
            }
            Some(h) if PROOF_HEADS.contains(&h) => {
                doc.items.push(Item::Proof(freshen(&p.proof(&item)?)));
            }
            _ => doc.items.push(Item::Term(p.term(&item)?)),
        }
    }
    Ok(doc)
}

/// Parses a file holding a proof.
pub fn parse_proof(src: &str) -> Result<Proof, ParseError> {
    let doc = parse_document(src)?;
    doc.proof().cloned().ok_or(ParseError::Expected {
        line: 1,
        col: 1,
        expected: "a proof".into(),
    })
}

/// Parses a single term, with `vars` as its declared free variables.
pub fn parse_term(src: &str, vars: &[(Name, Type)]) -> Result<Term, ParseError> {
    let mut p = Parser::default();
    p.globals.extend(vars.iter().cloned());
    let items = read_all(src)?;
    match items.as_slice() {
        [t] => p.term(t),
        _ => Err(ParseError::Expected {
            line: 1,
            col: 1,
            expected: "exactly one term".into(),
        }),
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let p = Parser::default();
    match read_all(src)?.as_slice() {
        [t] => p.ty(t),
        _ => Err(ParseError::Expected {
            line: 1,
            col: 1,
            expected: "exactly one type".into(),
        }),
    }
}

pub fn parse_formula(src: &str, vars: &[(Name, Type)]) -> Result<Formula, ParseError> {
    let mut p = Parser::default();
    p.globals.extend(vars.iter().cloned());
    match read_all(src)?.as_slice() {
        [a] => p.formula(a),
        _ => Err(ParseError::Expected {
            line: 1,
            col: 1,
            expected: "exactly one formula".into(),
        }),
    }
}

#[derive(Default)]
struct Parser {
    globals: BTreeMap<Name, Type>,
    defs: BTreeMap<String, Term>,
    formulas: BTreeMap<String, Formula>,
    scope: Vec<(Name, Type)>,
}

impl Parser {
    fn fixed<'a, const N: usize>(
        &self,
        s: &'a Sexp,
        shape: &str,
    ) -> Result<[&'a Sexp; N], ParseError> {
        match s {
            Sexp::List(items, _) if items.len() == N => Ok(std::array::from_fn(|i| &items[i])),
            _ => Err(ParseError::at(s.pos(), shape)),
        }
    }

    fn list<'a>(&self, s: &'a Sexp, min: usize, shape: &str) -> Result<&'a [Sexp], ParseError> {
        match s {
            Sexp::List(items, _) if items.len() >= min => Ok(items),
            _ => Err(ParseError::at(s.pos(), shape)),
        }
    }

    fn binder(&self, s: &Sexp) -> Result<Name, ParseError> {
        match s.as_atom() {
            Some(x)
                if !RESERVED.contains(&x)
                    && !x.starts_with('\'')
                    && !x.chars().all(|c| c.is_ascii_digit()) =>
            {
                Ok(Name::from(x))
            }
            _ => Err(ParseError::at(s.pos(), "a variable name")),
        }
    }

    fn ty(&self, s: &Sexp) -> Result<Type, ParseError> {
        match s {
            Sexp::Atom(a, pos) => match a.as_str() {
                "bool" => Ok(Type::Bool),
                "nat" => Ok(Type::Nat),
                "mark" => Ok(Type::Mark),
                "eps" => Ok(Type::Epsilon),
                v if v.len() > 1 && v.starts_with('\'') => Ok(Type::Var(Name::from(&v[1..]))),
                _ => Err(ParseError::at(*pos, "a type")),
            },
            Sexp::List(items, pos) => {
                let head = items.first().and_then(Sexp::as_atom);
                let args = || {
                    items[1..]
                        .iter()
                        .map(|t| self.ty(t))
                        .collect::<Result<Vec<_>, _>>()
                };
                match head {
                    Some("->") if items.len() >= 3 => {
                        let mut ts = args()?;
                        let cod = ts.pop().unwrap();
                        Ok(Type::arrows(ts, cod))
                    }
                    Some("*") if items.len() >= 3 => {
                        let ts = args()?;
                        let mut it = ts.into_iter().rev();
                        let last = it.next().unwrap();
                        Ok(it.fold(last, |acc, t| Type::prod(t, acc)))
                    }
                    _ => Err(ParseError::at(*pos, "a type `(-> ...)` or `(* ...)`")),
                }
            }
        }
    }

    fn with_bound<T>(&mut self, x: Name, ty: Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scope.push((x, ty));
        let r = f(self);
        self.scope.pop();
        r
    }

    fn var(&self, x: &str, pos: Pos) -> Result<Term, ParseError> {
        if let Some((_, ty)) = self.scope.iter().rev().find(|(y, _)| &**y == x) {
            return Ok(Term::var(x, ty.clone()));
        }
        if let Some(t) = self.defs.get(x) {
            return Ok(t.clone());
        }
        if let Some(ty) = self.globals.get(x) {
            return Ok(Term::var(x, ty.clone()));
        }
        Err(ParseError::at(
            pos,
            &format!("a bound or declared variable, found `{x}`"),
        ))
    }

    fn typed(&self, t: Term, pos: Pos) -> Result<Term, ParseError> {
        match type_of(&t) {
            Ok(_) => Ok(t),
            Err(e) => Err(ParseError::at(pos, &format!("a well-typed term ({e})"))),
        }
    }

    fn type_at(&self, t: &Term, pos: Pos) -> Result<Type, ParseError> {
        type_of(t).map_err(|e| ParseError::at(pos, &format!("a well-typed term ({e})")))
    }

    fn term(&mut self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom(a, pos) => {
                if a.chars().all(|c| c.is_ascii_digit()) {
                    let n: u64 = a.parse().map_err(|_| ParseError::at(*pos, "a numeral"))?;
                    return Ok(Term::numeral(n));
                }
                Ok(match a.as_str() {
                    "tt" => Term::tt(),
                    "ff" => Term::ff(),
                    "mtt" => Term::mark_tt(),
                    "mff" => Term::mark_ff(),
                    "mbot" => Term::mark_bot(),
                    "eps" => Term::Eps,
                    "succ" => Term::Const(Const::Succ),
                    "meq" => Term::Const(Const::MarkEq),
                    x => self.var(x, *pos)?,
                })
            }
            Sexp::List(items, pos) => {
                let pos = *pos;
                if items.is_empty() {
                    return Err(ParseError::at(pos, "a term"));
                }
                let head = items[0].as_atom().unwrap_or("");
                let n = items.len();
                let arity = |want: usize, shape: &str| {
                    if n == want {
                        Ok(())
                    } else {
                        Err(ParseError::at(pos, shape))
                    }
                };
                let t = match head {
                    "lam" => {
                        if n < 3 {
                            return Err(ParseError::at(pos, "(lam (x type) ... body)"));
                        }
                        return self.lam(&items[1..n - 1], &items[n - 1]);
                    }
                    "let" => {
                        arity(3, "(let (x term) body)")?;
                        let [x, t] = self.fixed::<2>(&items[1], "(x term)")?;
                        let x = self.binder(x)?;
                        let t = self.term(t)?;
                        let ty = self.type_at(&t, pos)?;
                        let body = self.with_bound(x.clone(), ty.clone(), |p| p.term(&items[2]))?;
                        Term::let_in(x, ty, t, body)
                    }
                    "pair" => {
                        arity(3, "(pair a b)")?;
                        Term::pair(self.term(&items[1])?, self.term(&items[2])?)
                    }
                    "fst" | "snd" | "check" | "succ" => {
                        arity(2, &format!("({head} t)"))?;
                        let t = self.term(&items[1])?;
                        match head {
                            "fst" => Term::fst(t),
                            "snd" => Term::snd(t),
                            "check" => Term::check(t),
                            _ => Term::succ(t),
                        }
                    }
                    "if" | "rec" | "mcase" => {
                        let k = if head == "mcase" { 4 } else { 3 };
                        if n < k + 1 {
                            return Err(ParseError::at(pos, &format!("{k} arguments to `{head}`")));
                        }
                        let args = items[1..]
                            .iter()
                            .map(|t| self.term(t))
                            .collect::<Result<Vec<_>, _>>()?;
                        let ty = self.type_at(&args[1], items[2].pos())?;
                        let c = match head {
                            "if" => Const::If(ty),
                            "rec" => Const::Rec(ty),
                            _ => Const::MarkCase(ty),
                        };
                        Term::apps(Term::Const(c), args)
                    }
                    "if-const" | "rec-const" | "mcase-const" => {
                        arity(2, &format!("({head} type)"))?;
                        let ty = self.ty(&items[1])?;
                        Term::Const(match head {
                            "if-const" => Const::If(ty),
                            "rec-const" => Const::Rec(ty),
                            _ => Const::MarkCase(ty),
                        })
                    }
                    _ => {
                        if n < 2 {
                            return Err(ParseError::at(pos, "an application with arguments"));
                        }
                        let f = self.term(&items[0])?;
                        let args = items[1..]
                            .iter()
                            .map(|t| self.term(t))
                            .collect::<Result<Vec<_>, _>>()?;
                        Term::apps(f, args)
                    }
                };
                self.typed(t, pos)
            }
        }
    }

    fn lam(&mut self, binders: &[Sexp], body: &Sexp) -> Result<Term, ParseError> {
        let Some((first, rest)) = binders.split_first() else {
            return self.term(body);
        };
        let [x, ty] = self.fixed::<2>(first, "a binder (x type)")?;
        let x = self.binder(x)?;
        let ty = self.ty(ty)?;
        let b = self.with_bound(x.clone(), ty.clone(), |p| p.lam(rest, body))?;
        Ok(Term::lam(x, ty, b))
    }

    fn formula(&mut self, s: &Sexp) -> Result<Formula, ParseError> {
        match s {
            Sexp::Atom(a, pos) => match a.as_str() {
                "F" | "falsity" => Ok(Formula::falsity()),
                "truth" => Ok(Formula::truth()),
                x => self
                    .formulas
                    .get(x)
                    .cloned()
                    .ok_or_else(|| ParseError::at(*pos, &format!("a formula, found `{x}`"))),
            },
            Sexp::List(items, pos) => {
                let head = items.first().and_then(Sexp::as_atom).unwrap_or("");
                match head {
                    "atom" => {
                        let [_, t] = self.fixed::<2>(s, "(atom t)")?;
                        let t = self.term(t)?;
                        if self.type_at(&t, *pos)? != Type::Bool {
                            return Err(ParseError::at(*pos, "a boolean term in `atom`"));
                        }
                        Ok(Formula::atom(t))
                    }
                    "imp" => {
                        let items = self.list(s, 3, "(imp A B ...)")?;
                        let mut fs = items[1..]
                            .iter()
                            .map(|a| self.formula(a))
                            .collect::<Result<Vec<_>, _>>()?;
                        let last = fs.pop().unwrap();
                        Ok(fs
                            .into_iter()
                            .rev()
                            .fold(last, |acc, a| Formula::implies(a, acc)))
                    }
                    "not" => {
                        let [_, a] = self.fixed::<2>(s, "(not A)")?;
                        Ok(Formula::not(self.formula(a)?))
                    }
                    "all" | "exc" => {
                        let (x, ty, body) = self.quantifier(items, *pos, head)?;
                        Ok(if head == "all" {
                            Formula::forall(x, ty, body)
                        } else {
                            Formula::exc(x, ty, body)
                        })
                    }
                    _ => Err(ParseError::at(
                        *pos,
                        "a formula `(atom t)`, `(imp ...)`, `(all ...)`, `(not A)` or `(exc ...)`",
                    )),
                }
            }
        }
    }

    /// `(all (x ty) A)` or `(all x ty A)`
    fn quantifier(
        &mut self,
        items: &[Sexp],
        pos: Pos,
        head: &str,
    ) -> Result<(Name, Type, Formula), ParseError> {
        let (x, ty, body) = match items.len() {
            3 => {
                let [x, ty] = self.fixed::<2>(&items[1], "a binder (x type)")?;
                (x, ty, &items[2])
            }
            4 => (&items[1], &items[2], &items[3]),
            _ => return Err(ParseError::at(pos, &format!("({head} (x type) A)"))),
        };
        let x = self.binder(x)?;
        let ty = self.ty(ty)?;
        let body = self.with_bound(x.clone(), ty.clone(), |p| p.formula(body))?;
        Ok((x, ty, body))
    }

    /// `(A x)` with `x : ty` bound in `A`.
    fn motive(&mut self, s: &Sexp, ty: Type) -> Result<Motive, ParseError> {
        let [a, x] = self.fixed::<2>(s, "a motive (A x)")?;
        let x = self.binder(x)?;
        let body = self.with_bound(x.clone(), ty.clone(), |p| p.formula(a))?;
        Ok(Motive::new(x, ty, body))
    }

    fn proof(&mut self, s: &Sexp) -> Result<Proof, ParseError> {
        let pos = s.pos();
        let head = s.head().ok_or_else(|| ParseError::at(pos, "a proof"))?;
        match head {
            "truth" => {
                self.fixed::<1>(s, "(truth)")?;
                Ok(Proof::Truth)
            }
            "assume" => {
                let [_, u, a] = self.fixed::<3>(s, "(assume u A)")?;
                Ok(Proof::assume(self.binder(u)?, self.formula(a)?))
            }
            "imp-intro" => {
                let [_, u, a, m] = self.fixed::<4>(s, "(imp-intro u A M)")?;
                let u = self.binder(u)?;
                let a = self.formula(a)?;
                Ok(Proof::imp_intro(u, a, self.proof(m)?))
            }
            "imp-elim" => {
                let items = self.list(s, 3, "(imp-elim M N ...)")?;
                let m = self.proof(&items[1])?;
                let args = items[2..]
                    .iter()
                    .map(|n| self.proof(n))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Proof::imp_elims(m, args))
            }
            "all-intro" => {
                let [_, x, ty, m] = self.fixed::<4>(s, "(all-intro x type M)")?;
                let x = self.binder(x)?;
                let ty = self.ty(ty)?;
                let m = self.with_bound(x.clone(), ty.clone(), |p| p.proof(m))?;
                Ok(Proof::all_intro(x, ty, m))
            }
            "all-elim" => {
                let items = self.list(s, 3, "(all-elim M t ...)")?;
                let mut m = self.proof(&items[1])?;
                for t in &items[2..] {
                    m = Proof::all_elim(m, self.term(t)?);
                }
                Ok(m)
            }
            "cases" => {
                let [_, mo, b, mt, mf] = self.fixed::<5>(s, "(cases (A b) b Mtt Mff)")?;
                let motive = self.motive(mo, Type::Bool)?;
                let b = self.term(b)?;
                Ok(Proof::cases(motive, b, self.proof(mt)?, self.proof(mf)?))
            }
            "ind" => {
                let [_, mo, t, base, n, u, step] =
                    self.fixed::<7>(s, "(ind (A n) t Mbase n u Nstep)")?;
                let motive = self.motive(mo, Type::Nat)?;
                let t = self.term(t)?;
                let base = self.proof(base)?;
                let n = self.binder(n)?;
                let u = self.binder(u)?;
                let step = self.with_bound(n.clone(), Type::Nat, |p| p.proof(step))?;
                Ok(Proof::ind(motive, t, base, n, u, step))
            }
            "efq" | "stab" => {
                let [_, a] = self.fixed::<2>(s, &format!("({head} A)"))?;
                let a = self.formula(a)?;
                Ok(if head == "efq" {
                    mk_efq(&a)
                } else {
                    mk_stability(&a)
                })
            }
            _ => Err(ParseError::at(pos, "a proof")),
        }
    }
}
