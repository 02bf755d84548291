use super::*;
use crate::kernel::{normalize, r_equal, Fresh, Term, Type};
use crate::logic::Formula;

fn bvar(x: &str) -> Term {
    Term::var(x, Type::Bool)
}

fn iszero(t: Term) -> Term {
    Term::rec(
        Type::Bool,
        t,
        Term::tt(),
        Term::lam("_a", Type::Nat, Term::lam("_b", Type::Bool, Term::ff())),
    )
}

fn f_app(t: Term) -> Term {
    Term::app(Term::var("f", Type::arrow(Type::Nat, Type::Nat)), t)
}

fn weak_exists() -> Formula {
    let p = Term::var("p", Type::arrow(Type::Nat, Type::Bool));
    Formula::exc(
        "k",
        Type::Nat,
        Formula::atom(Term::app(p, Term::var("k", Type::Nat))),
    )
}

#[test]
fn atom_types_are_null() {
    let t = tau(&Formula::atom(bvar("b")), Interp::Plain);
    assert_eq!(t.plus, Type::Epsilon);
    assert_eq!(t.minus, Type::Epsilon);
}

#[test]
fn weak_existence_types() {
    let t = tau(&weak_exists(), Interp::Plain);
    assert_eq!(t.plus, Type::Nat);
    assert_eq!(t.minus, Type::Epsilon);
    assert_eq!(t.star, Type::Nat);
}

#[test]
fn marked_implication_type() {
    // (all n. at) -> at: tau+ = eps x (mark x nat)
    let a = Formula::forall("n", Type::Nat, Formula::atom(bvar("b")));
    let imp = Formula::implies(a, Formula::atom(bvar("c")));
    let t = tau(&imp, Interp::Marked);
    assert_eq!(t.plus, Type::prod(Type::Mark, Type::Nat));
    assert_eq!(tau(&imp, Interp::Plain).plus, Type::Nat);
}

#[test]
fn translate_atom_and_forall() {
    let at = Formula::atom(bvar("b"));
    assert_eq!(
        translate(&at, &Term::Eps, &Term::Eps, Interp::Plain).unwrap(),
        at
    );

    let n = Term::var("n", Type::Nat);
    let a = Formula::forall("n", Type::Nat, Formula::atom(iszero(f_app(n))));
    let s = Term::var("s", Type::Nat);
    let got = translate(&a, &Term::Eps, &s, Interp::Plain).unwrap();
    let Formula::Atom(t) = got else {
        panic!("{got}")
    };
    assert!(r_equal(&t, &iszero(f_app(s))).unwrap());
}

#[test]
fn translation_is_quantifier_free() {
    let a = weak_exists();
    for v in [Interp::Plain, Interp::Marked] {
        let ct = tau(&a, v);
        let r = Term::var("r", ct.star.clone());
        let s = Term::var("s", ct.minus.clone());
        let got = translate(&a, &r, &s, v).unwrap();
        assert!(got.is_quantifier_free());
    }
}

fn eval_bool(t: &Term) -> bool {
    match normalize(t).unwrap() {
        Term::Const(crate::kernel::Const::Tt) => true,
        Term::Const(crate::kernel::Const::Ff) => false,
        other => panic!("not a boolean value: {other}"),
    }
}

#[test]
fn characteristic_of_implication() {
    let c = Formula::implies(Formula::atom(bvar("p")), Formula::atom(bvar("q")));
    let tc = characteristic_term(&c, Interp::Plain).unwrap();
    for p in [false, true] {
        for q in [false, true] {
            let lit = |b: bool| if b { Term::tt() } else { Term::ff() };
            let t = tc.subst("p", &lit(p)).subst("q", &lit(q));
            assert_eq!(eval_bool(&t), !p || q);
        }
    }
}

#[test]
fn characteristic_of_forall() {
    let n = Term::var("n", Type::Nat);
    let c = Formula::forall("n", Type::Nat, Formula::atom(iszero(f_app(n))));
    let tc = characteristic_term(&c, Interp::Plain).unwrap();
    // f = lam k. k - 1 style table: f 0 = 0, f k = k otherwise
    let table = Term::lam("k", Type::Nat, Term::var("k", Type::Nat));
    for y in 0..4u64 {
        let t = Term::app(tc.subst("f", &table), Term::numeral(y));
        assert_eq!(eval_bool(&t), y == 0);
    }
}

#[test]
fn lazy_or() {
    let lit = |b: bool| if b { Term::tt() } else { Term::ff() };
    for x in [false, true] {
        for y in [false, true] {
            let t = Term::apps(t_or(), [lit(x), lit(y)]);
            assert_eq!(eval_bool(&t), x || y);
        }
    }
}

#[test]
fn partial_application() {
    let mut fresh = Fresh::new();
    let f = Term::var("f", Type::arrow(Type::Nat, Type::Bool));
    assert_eq!(
        partial_apply(&f, &Term::zero(), &mut fresh).unwrap(),
        Term::app(f, Term::zero())
    );
    let g = Term::var(
        "g",
        Type::arrow(Type::prod(Type::Nat, Type::Bool), Type::Nat),
    );
    let ga = partial_apply(&g, &Term::zero(), &mut fresh).unwrap();
    let Term::Lam(_, ty, _) = &ga else { panic!() };
    assert_eq!(*ty, Type::Bool);
    let full = Term::app(ga, Term::tt());
    assert_eq!(
        normalize(&full).unwrap(),
        Term::app(g, Term::pair(Term::zero(), Term::tt()))
    );
}

#[test]
fn extended_projections() {
    let mut fresh = Fresh::new();
    let y = Term::var("y", Type::Nat);
    let f = Term::lam("y", Type::Nat, Term::pair(y.clone(), Term::tt()));
    let l = proj_fun(&f, Side::Left, &mut fresh).unwrap();
    assert!(r_equal(&l, &Term::lam("y", Type::Nat, y)).unwrap());
    let r = proj_fun(&f, Side::Right, &mut fresh).unwrap();
    assert!(r_equal(&r, &Term::lam("y", Type::Nat, Term::tt())).unwrap());
    assert_eq!(
        crate::kernel::type_of(&l).unwrap(),
        Type::arrow(Type::Nat, Type::Nat)
    );
}

#[test]
fn plugging_captures() {
    let t = Term::var("t", Type::Nat);
    assert_eq!(plug(&DefContext::empty(), &t).unwrap(), t);

    let x = Term::var("x", Type::arrow(Type::Nat, Type::Nat));
    let y = Term::var("y", Type::Nat);
    let e = DefContext::abstraction("y", Type::Nat);
    let out = plug(&e, &Term::app(x.clone(), y.clone())).unwrap();
    assert_eq!(out, Term::lam("y", Type::Nat, Term::app(x, y)));
    assert_eq!(e.binders_over_hole(), vec![crate::kernel::Name::from("y")]);
}

#[test]
fn plug_into_let() {
    let s = Term::var("s", Type::Nat);
    let z = Term::var("z", Type::Nat);
    let e = DefContext::new(Term::let_in("z", Type::Nat, s.clone(), hole_var()));
    let plus = Term::var("plus", Type::arrows([Type::Nat, Type::Nat], Type::Nat));
    let out = plug(&e, &Term::apps(plus.clone(), [z.clone(), z])).unwrap();
    assert_eq!(normalize(&out).unwrap(), Term::apps(plus, [s.clone(), s]));
}

#[test]
fn composition_matches_nested_plugging() {
    let e1 = DefContext::abstraction("a", Type::Nat);
    let e2 = DefContext::new(Term::let_in(
        "b",
        Type::Nat,
        Term::succ(Term::var("a", Type::Nat)),
        hole_var(),
    ));
    let t = Term::pair(Term::var("a", Type::Nat), Term::var("b", Type::Nat));
    let lhs = plug(&compose_contexts(&e1, &e2), &t).unwrap();
    let rhs = plug(&e1, &plug(&e2, &t).unwrap()).unwrap();
    assert!(r_equal(&lhs, &rhs).unwrap());
}
