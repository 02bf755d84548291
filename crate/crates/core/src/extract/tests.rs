use super::*;
use crate::kernel::{normalize, type_of, Term, Type};
use crate::logic::{Formula, Motive, Proof};

fn g_ty() -> Type {
    Type::arrow(Type::Nat, Type::Bool)
}

fn g_at(k: Term) -> Formula {
    Formula::atom(Term::app(Term::var("g", g_ty()), k))
}

/// `u : all k. at(g k)` used at `0` in the base and at `S n` in the step of
/// an induction proving `at(g t)`.
fn pointwise_induction(target: Term) -> Proof {
    let c = Formula::forall("k", Type::Nat, g_at(Term::var("k", Type::Nat)));
    let n = Term::var("n", Type::Nat);
    let motive = Motive::new("m", Type::Nat, g_at(Term::var("m", Type::Nat)));
    let base = Proof::all_elim(Proof::assume("u", c.clone()), Term::zero());
    let step = Proof::imp_intro(
        "h",
        g_at(n.clone()),
        Proof::all_elim(Proof::assume("u", c), Term::succ(n)),
    );
    let step = Proof::AllIntro("n".into(), Type::Nat, std::sync::Arc::new(step));
    ind_from_parts(motive, target, base, step)
}

fn ind_from_parts(motive: Motive, target: Term, base: Proof, step: Proof) -> Proof {
    // step is `all n. A(n) -> A(S n)` in rule form: strip the binders
    let Proof::AllIntro(var, _, body) = step else {
        unreachable!()
    };
    let Proof::ImpIntro(hyp, _, body) = (*body).clone() else {
        unreachable!()
    };
    Proof::ind(motive, target, base, var, hyp, (*body).clone())
}

/// `lam k. k is even`
fn even() -> Term {
    Term::lam(
        "k",
        Type::Nat,
        Term::rec(
            Type::Bool,
            Term::var("k", Type::Nat),
            Term::tt(),
            Term::lam(
                "_",
                Type::Nat,
                Term::lam(
                    "b",
                    Type::Bool,
                    Term::ite(
                        Type::Bool,
                        Term::var("b", Type::Bool),
                        Term::ff(),
                        Term::tt(),
                    ),
                ),
            ),
        ),
    )
}

/// `lam k. k < bound` by recursion on `bound`, as a closed term.
fn below(bound: u64) -> Term {
    let mut t = Term::lam("k", Type::Nat, Term::ff());
    for i in (0..bound).rev() {
        let _ = i;
        t = Term::lam(
            "k",
            Type::Nat,
            Term::rec(
                Type::Bool,
                Term::var("k", Type::Nat),
                Term::tt(),
                Term::lam(
                    "p",
                    Type::Nat,
                    Term::lam("_", Type::Bool, Term::app(t, Term::var("p", Type::Nat))),
                ),
            ),
        );
    }
    t
}

fn all_configs() -> Vec<ExtractConfig> {
    let mut out = Vec::new();
    for variant in [Variant::QuasiLinear, Variant::Marked] {
        for mode in [
            InductionMode::NaiveSeparate,
            InductionMode::Simultaneous,
            InductionMode::Flagged,
        ] {
            for o in [Orientation::Last, Orientation::First] {
                out.push(ExtractConfig::new(variant, mode).with_orientation(o));
            }
        }
    }
    out
}

fn closed_value(t: &Term, g: &Term, n: u64) -> Term {
    let t = t.subst("g", g).subst("n", &Term::numeral(n));
    normalize(&t).unwrap()
}

fn counterexample(res: &ExtractionResult, g: &Term, n: u64) -> Term {
    let asm = res.assemble().unwrap();
    let d = &asm.minus["u"];
    let d = match res.config.variant {
        Variant::QuasiLinear => d.clone(),
        Variant::Marked => Term::snd(d.clone()),
    };
    closed_value(&d, g, n)
}

#[test]
fn assumption_refutes_with_its_own_challenge() {
    let a = g_at(Term::var("n", Type::Nat));
    let c = Formula::implies(a.clone(), a);
    let p = Proof::assume("u", c);
    let ql = extract(&p, ExtractConfig::default()).unwrap();
    let y = Term::var(ql.challenge.clone(), ql.challenge_ty.clone());
    assert_eq!(ql.dminus["u"], y);
    let mk = extract(
        &p,
        ExtractConfig::new(Variant::Marked, InductionMode::default()),
    )
    .unwrap();
    let y = Term::var(mk.challenge.clone(), mk.challenge_ty.clone());
    assert_eq!(mk.dminus["u"], Term::pair(Term::mark_bot(), y));
}

#[test]
fn identity_has_identity_witness() {
    let a = Formula::forall("k", Type::Nat, g_at(Term::var("k", Type::Nat)));
    let p = Proof::imp_intro("u", a.clone(), Proof::assume("u", a));
    for cfg in all_configs() {
        let res = extract(&p, cfg).unwrap();
        let plus = res.assemble().unwrap().plus;
        // tau+(A -> A) = nat => nat after erasure; the witness maps a
        // challenge to itself
        let f = Term::app(plus, Term::numeral(7));
        let f = match cfg.variant {
            Variant::QuasiLinear => normalize(&f).unwrap(),
            Variant::Marked => {
                let f = normalize(&f).unwrap();
                let Term::Pair(m, v) = f else { panic!("{f}") };
                assert_eq!(*m, Term::mark_bot());
                (*v).clone()
            }
        };
        assert_eq!(f.as_numeral(), Some(7), "{cfg:?}");
    }
}

#[test]
fn extracted_terms_are_well_typed() {
    let p = pointwise_induction(Term::var("n", Type::Nat));
    for cfg in all_configs() {
        let res = extract(&p, cfg).unwrap();
        assert_eq!(res.fallbacks, 0);
        type_of(&res.full_raw().unwrap()).unwrap();
        let asm = res.assemble().unwrap();
        type_of(&asm.full).unwrap();
        let ty = type_of(&asm.minus["u"]).unwrap();
        match cfg.variant {
            Variant::QuasiLinear => assert_eq!(ty, Type::Nat),
            Variant::Marked => assert_eq!(ty, Type::prod(Type::Mark, Type::Nat)),
        }
    }
}

/// Every counterexample produced must refute `g` whenever some `k <= n` does.
#[test]
fn induction_counterexamples_refute() {
    let p = pointwise_induction(Term::var("n", Type::Nat));
    for cfg in all_configs() {
        let res = extract(&p, cfg).unwrap();
        for (g, holds) in [
            (
                even(),
                Box::new(|k: u64| k.is_multiple_of(2)) as Box<dyn Fn(u64) -> bool>,
            ),
            (below(3), Box::new(|k| k < 3)),
        ] {
            for n in 0..6u64 {
                let d = counterexample(&res, &g, n).as_numeral().unwrap();
                let any_fail = (0..=n).any(|k| !holds(k));
                if any_fail {
                    assert!(!holds(d), "{cfg:?} n={n} d={d}");
                    assert!(d <= n);
                }
            }
        }
    }
}

#[test]
fn orientation_selects_last_or_first() {
    let p = pointwise_induction(Term::var("n", Type::Nat));
    for variant in [Variant::QuasiLinear] {
        for mode in [
            InductionMode::Simultaneous,
            InductionMode::NaiveSeparate,
            InductionMode::Flagged,
        ] {
            let last = extract(&p, ExtractConfig::new(variant, mode)).unwrap();
            let first = extract(
                &p,
                ExtractConfig::new(variant, mode).with_orientation(Orientation::First),
            )
            .unwrap();
            // odd numbers below 6 fail `even`
            let dl = counterexample(&last, &even(), 5).as_numeral().unwrap();
            let df = counterexample(&first, &even(), 5).as_numeral().unwrap();
            if mode == InductionMode::Flagged {
                assert_eq!(dl, 1, "flagged keeps the first refuting candidate");
            } else {
                assert_eq!((dl, df), (5, 1), "{mode:?}");
            }
        }
    }
}

#[test]
fn one_contraction_per_shared_assumption() {
    let p = pointwise_induction(Term::var("n", Type::Nat));
    let res = extract(&p, ExtractConfig::default()).unwrap();
    assert_eq!(res.assemble().unwrap().full.count_checks(), 1);
    // used once: no contraction at all
    let c = Formula::forall("k", Type::Nat, g_at(Term::var("k", Type::Nat)));
    let once = Proof::all_elim(Proof::assume("u", c), Term::zero());
    let res = extract(&once, ExtractConfig::default()).unwrap();
    assert_eq!(res.assemble().unwrap().full.count_checks(), 0);
}

#[test]
fn naive_mode_nests_recursion() {
    let p = pointwise_induction(Term::var("n", Type::Nat));
    let naive = extract(
        &p,
        ExtractConfig::new(Variant::QuasiLinear, InductionMode::NaiveSeparate),
    )
    .unwrap();
    let simul = extract(&p, ExtractConfig::default()).unwrap();
    // the positive recursion is over a nulltype here and vanishes on erasure
    assert_eq!(naive.full_raw().unwrap().count_rec_nodes(), 2);
    assert_eq!(simul.full_raw().unwrap().count_rec_nodes(), 1);
}

#[test]
fn strict_mode_rejects_general_case() {
    // A(m) = all k. at(g k): negative content is nat
    let c = Formula::forall("k", Type::Nat, g_at(Term::var("k", Type::Nat)));
    let motive = Motive::new("m", Type::Nat, c.clone());
    let base = Proof::assume("u", c.clone());
    let p = Proof::ind(
        motive,
        Term::var("n", Type::Nat),
        base,
        "j",
        "h",
        Proof::assume("h", c),
    );
    let mut cfg = ExtractConfig::new(Variant::QuasiLinear, InductionMode::Flagged);
    let res = extract(&p, cfg).unwrap();
    assert_eq!(res.fallbacks, 1);
    type_of(&res.assemble().unwrap().full).unwrap();
    cfg.strict_mode = true;
    assert_eq!(
        extract(&p, cfg).unwrap_err(),
        ExtractError::SpecialCaseInapplicable
    );
}

#[test]
fn general_scheme_passes_challenge_through() {
    let c = Formula::forall("k", Type::Nat, g_at(Term::var("k", Type::Nat)));
    let motive = Motive::new("m", Type::Nat, c.clone());
    let base = Proof::assume("u", c.clone());
    let p = Proof::ind(
        motive,
        Term::var("n", Type::Nat),
        base,
        "j",
        "h",
        Proof::assume("h", c),
    );
    let res = extract(&p, ExtractConfig::default()).unwrap();
    let asm = res.assemble().unwrap();
    // the full term takes the challenge k and hands it back to u
    let d = Term::app(asm.minus["u"].clone(), Term::numeral(4));
    let d = closed_value(&d, &even(), 3);
    assert_eq!(d.as_numeral(), Some(4));
}
