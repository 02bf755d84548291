mod common;

use common::{epsilon_congruence, kernel_health, Gen};
use naw::kernel::{epsilon_simplify_term, epsilon_simplify_type, Term, Type};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn random_terms_are_healthy(seed in any::<u64>()) {
        let (t, ty) = Gen::new(seed).typed_term();
        prop_assert!(t.size() <= common::MAX_TERM_SIZE);
        if let Err(e) = kernel_health(&t, &ty) {
            return Err(TestCaseError::fail(e));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn epsilon_simplification_is_a_congruence(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b) = (g.ty_eps(3), g.ty_eps(2));
        if let Err(e) = epsilon_congruence(&a, &b) {
            return Err(TestCaseError::fail(e));
        }
    }
}

#[test]
fn generator_covers_every_former() {
    let mut seen = [false; 6];
    for seed in 0..500 {
        let (t, _) = Gen::new(seed).typed_term();
        let s = t.to_string();
        for (i, key) in ["(lam", "(rec", "(if", "(mcase", "(fst", "(pair"]
            .iter()
            .enumerate()
        {
            seen[i] |= s.contains(key);
        }
    }
    assert!(seen.iter().all(|s| *s), "{seen:?}");
}

#[test]
fn nulltype_rules_one_by_one() {
    let e = Type::Epsilon;
    let s = epsilon_simplify_type;
    assert_eq!(s(&Type::prod(Type::Bool, e.clone())), Type::Bool);
    assert_eq!(s(&Type::prod(e.clone(), Type::Bool)), Type::Bool);
    assert_eq!(s(&Type::arrow(Type::Bool, e.clone())), e);
    assert_eq!(s(&Type::arrow(e.clone(), Type::Bool)), Type::Bool);

    let r = Term::var("r", Type::Mark);
    let st = |t: &Term| epsilon_simplify_term(t).unwrap();
    assert_eq!(
        st(&Term::fst(Term::var(
            "p",
            Type::prod(Type::Mark, e.clone())
        ))),
        Term::var("p", Type::Mark)
    );
    assert_eq!(
        st(&Term::snd(Term::var(
            "p",
            Type::prod(e.clone(), Type::Mark)
        ))),
        Term::var("p", Type::Mark)
    );
    assert_eq!(st(&Term::pair(r.clone(), Term::Eps)), r);
    assert_eq!(st(&Term::pair(Term::Eps, r.clone())), r);
    assert_eq!(st(&Term::lam("x", Type::Nat, Term::Eps)), Term::Eps);
    assert_eq!(st(&Term::lam("x", e.clone(), r.clone())), r);
    let h = Term::var("h", Type::arrow(Type::Nat, e.clone()));
    assert_eq!(st(&Term::app(h, Term::zero())), Term::Eps);
    let k = Term::var("k", Type::arrow(e, Type::Mark));
    assert_eq!(st(&Term::app(k, Term::Eps)), Term::var("k", Type::Mark));
}
