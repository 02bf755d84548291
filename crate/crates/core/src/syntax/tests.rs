use super::*;
use crate::kernel::{normalize, Term, Type};
use crate::logic::{check_proof_open, Formula, Proof};

#[test]
fn truth_and_identity() {
    assert!(matches!(parse_proof("(truth)").unwrap(), Proof::Truth));
    let p = parse_proof("(imp-intro u (atom ff) (assume u (atom ff)))").unwrap();
    let a = check_proof_open(&p).unwrap();
    assert_eq!(a, Formula::implies(Formula::falsity(), Formula::falsity()));
}

#[test]
fn arity_errors_carry_positions() {
    let err = parse_proof("\n  (imp-elim (truth))").unwrap_err();
    assert_eq!(err.position(), (2, 3));
    let err = parse_proof("(assume u (atom 0))").unwrap_err();
    assert!(matches!(err, ParseError::Expected { .. }));
    let err = parse_proof("(truth").unwrap_err();
    assert!(matches!(err, ParseError::Expected { .. }));
}

#[test]
fn duplicate_declarations() {
    let err = parse_document("(var f nat)\n(var f bool)").unwrap_err();
    assert_eq!(
        err,
        ParseError::DuplicateBinder {
            name: "f".into(),
            line: 2,
            col: 6
        }
    );
}

#[test]
fn types_and_terms() {
    assert_eq!(
        parse_type("(-> nat nat bool)").unwrap(),
        Type::arrows([Type::Nat, Type::Nat], Type::Bool)
    );
    assert_eq!(
        parse_type("(* nat bool mark)").unwrap().to_string(),
        "(* nat (* bool mark))"
    );
    let t = parse_term("(rec 2 0 (lam (k nat) (p nat) (succ p)))", &[]).unwrap();
    assert_eq!(normalize(&t).unwrap(), Term::numeral(2));
    let t = parse_term("(let (z 3) (pair z z))", &[]).unwrap();
    assert_eq!(
        normalize(&t).unwrap(),
        Term::pair(Term::numeral(3), Term::numeral(3))
    );
    let t = parse_term("(f 1)", &[("f".into(), Type::arrow(Type::Nat, Type::Bool))]).unwrap();
    assert_eq!(t.to_string(), "(f 1)");
    assert!(parse_term("(tt 0)", &[]).is_err());
}

#[test]
fn printed_terms_read_back() {
    for src in [
        "(lam (x nat) (if (meq mtt mbot) x (succ x)))",
        "(mcase mff 0 1 2)",
        "((lam (x (* nat bool)) (snd x)) (pair 0 tt))",
        "(rec 3 tt (lam (k nat) (b bool) (if b ff tt)))",
    ] {
        let t = parse_term(src, &[]).unwrap();
        let again = parse_term(&t.to_string(), &[]).unwrap();
        assert_eq!(t, again, "{src}");
    }
}

#[test]
fn induction_syntax_and_sugar() {
    let src = "
        (var f (-> nat bool))
        (var n nat)
        (formula C (all k nat (not (atom (f k)))))
        (proof
          (ind ((imp C (atom tt)) n) n
               (imp-intro u C (truth))
               n h
               (imp-intro w C (truth))))";
    let doc = parse_document(src).unwrap();
    let p = doc.proof().unwrap();
    check_proof_open(p).unwrap();
    let again = parse_document(&format!("(var f (-> nat bool)) (var n nat) {p}")).unwrap();
    assert_eq!(again.proof().unwrap().to_string(), p.to_string());
    let efq = parse_proof("(efq (all x nat (atom ff)))").unwrap();
    assert!(check_proof_open(&efq)
        .unwrap()
        .to_string()
        .starts_with("(imp (atom ff)"));
}
