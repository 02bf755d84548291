//! One check per acceptance criterion. Each returns a short summary on
//! success and the first deviation otherwise.

use std::collections::BTreeMap;

use naw::extract::{
    contract_marked, extract, ContractSpec, ExtractConfig, InductionMode, Orientation, Variant,
};
use naw::interp::{tau_star_raw, Interp};
use naw::kernel::{epsilon_simplify_term, Fresh, Name, Term, Type};
use naw::logic::Formula;
use naw::runtime::{
    corpus, corpus_entry, evaluate, first_counterexample, last_counterexample, size_family,
    verify_proof, EvalConfig, FiniteModel, Ground, KDist, Mark, SearchBench, Table, Value,
};

use super::{epsilon_congruence, kernel_health, Gen};

pub type Outcome = Result<String, String>;

const MARKS: [Mark; 3] = [Mark::Tt, Mark::Ff, Mark::Bot];

fn mark_term(m: Mark) -> Term {
    match m {
        Mark::Tt => Term::mark_tt(),
        Mark::Ff => Term::mark_ff(),
        Mark::Bot => Term::mark_bot(),
    }
}

/// `C := all k. at(p k)`, one atom over a predicate table.
fn one_atom() -> Formula {
    let p = Term::var("p", Type::arrow(Type::Nat, Type::Bool));
    Formula::forall(
        "k",
        Type::Nat,
        Formula::atom(Term::app(p, Term::var("k", Type::Nat))),
    )
}

const S1: u64 = 1;
const S2: u64 = 2;

/// Runs the marked contraction of `s1♭m1` and `s2♭m2` with `|C|` true at
/// the indices in `holds`. Returns the result and the number of checks.
fn run_contract(m1: Mark, m2: Mark, holds: &[u64]) -> Result<(Mark, u64, u64), String> {
    let c = one_atom();
    let x = Term::var("x", tau_star_raw(&c, Interp::Marked));
    let cand = |m, s| Term::pair(mark_term(m), Term::pair(Term::numeral(s), Term::Eps));
    let spec = ContractSpec {
        formula: &c,
        param: x,
        t1: Some(cand(m1, S1)),
        t2: Some(cand(m2, S2)),
    };
    let t = contract_marked(spec, &mut Fresh::new());
    let t = epsilon_simplify_term(&t).map_err(|e| e.to_string())?;
    let table: Vec<Value> = (0..=S2).map(|i| Value::Bool(holds.contains(&i))).collect();
    let mut b = BTreeMap::new();
    b.insert(Name::from("p"), Value::table(Table::nat_list(table)));
    let (g, stats) = evaluate(&t, &b, EvalConfig::default()).map_err(|e| e.to_string())?;
    match g {
        Ground::Pair(m, s) => match (*m, *s) {
            (Ground::Mark(m), Ground::Nat(s)) => Ok((m, s, stats.tc_checks)),
            other => Err(format!("unexpected result {other:?}")),
        },
        other => Err(format!("unexpected result {other}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Cell {
    D1,
    D2,
    Split,
}

/// The case table indexed `[m1][m2]` in the order tt, ff, bot. The printed
/// table in the source has its axis labels swapped; this is the reading
/// that agrees with the defining term.
const CASES: [[Cell; 3]; 3] = [
    [Cell::D1, Cell::D2, Cell::D2],
    [Cell::D1, Cell::D1, Cell::D1],
    [Cell::D1, Cell::D2, Cell::Split],
];

pub fn table_oracle() -> Outcome {
    let mut n = 0;
    for (i, &m1) in MARKS.iter().enumerate() {
        for (j, &m2) in MARKS.iter().enumerate() {
            for c_at_s1 in [true, false] {
                let holds: &[u64] = if c_at_s1 { &[S1] } else { &[] };
                let got = run_contract(m1, m2, holds)?;
                let want = match CASES[i][j] {
                    Cell::D1 => (m1, S1, 0),
                    Cell::D2 => (m2, S2, 0),
                    Cell::Split if c_at_s1 => (m2, S2, 1),
                    Cell::Split => (Mark::Ff, S1, 1),
                };
                if got != want {
                    return Err(format!(
                        "m1={m1} m2={m2} |C|(s1)={c_at_s1}: got {got:?}, want {want:?}"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} cases"))
}

pub fn lemma_conditions() -> Outcome {
    let (mut n, mut skipped) = (0, 0);
    for &m1 in &MARKS {
        for &m2 in &MARKS {
            for bits in 0..4u8 {
                let (c1, c2) = (bits & 1 != 0, bits & 2 != 0);
                // Inputs must satisfy their own condition (ii).
                if (m1 == Mark::Ff && c1) || (m2 == Mark::Ff && c2) {
                    skipped += 1;
                    continue;
                }
                let holds: Vec<u64> = [(S1, c1), (S2, c2)]
                    .iter()
                    .filter(|(_, h)| *h)
                    .map(|(s, _)| *s)
                    .collect();
                let (m, s, _) = run_contract(m1, m2, &holds)?;
                let c = |s: u64| holds.contains(&s);
                let premise = m == Mark::Tt || c(s);
                let a1 = !premise || m1 == Mark::Tt || c1;
                let a2 = !premise || m2 == Mark::Tt || c2;
                let b = m != Mark::Ff || !c(s);
                if !(a1 && a2 && b) {
                    return Err(format!(
                        "m1={m1} m2={m2} C(s1)={c1} C(s2)={c2}: A1={a1} A2={a2} B={b}"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(format!(
        "{n} instances ({skipped} inadmissible inputs skipped)"
    ))
}

pub const SOUNDNESS_BUDGET: usize = 1000;

pub fn soundness(configs: &[ExtractConfig], budget: usize) -> Outcome {
    let model = FiniteModel::default();
    let (mut proofs, mut instances, mut premise) = (0, 0, 0);
    for e in corpus() {
        let p = e.proof().map_err(|err| format!("{}: {err}", e.name))?;
        proofs += 1;
        for cfg in configs {
            let r = verify_proof(&p, *cfg, &model, budget)
                .map_err(|err| format!("{}: {err}", e.name))?;
            if !r.exhaustive && r.instances < budget {
                return Err(format!(
                    "{}: only {} sampled instances",
                    e.name, r.instances
                ));
            }
            if let Some(f) = r.failures.first() {
                return Err(format!(
                    "{} {:?}: FAIL at {}",
                    e.name,
                    cfg,
                    serde_json::to_string(&f.instance).unwrap_or_default()
                ));
            }
            instances += r.instances;
            premise += r.premise_held;
        }
    }
    if proofs < 6 {
        return Err(format!("corpus has only {proofs} proofs"));
    }
    Ok(format!(
        "{proofs} proofs x {} configurations, {instances} instances, premise held in {premise}",
        configs.len()
    ))
}

pub fn both_variants() -> Vec<ExtractConfig> {
    [Variant::QuasiLinear, Variant::Marked]
        .into_iter()
        .map(|v| ExtractConfig::new(v, InductionMode::Simultaneous))
        .collect()
}

pub fn size_trend() -> Outcome {
    let ns = [4usize, 8, 16, 32];
    let (mut detail, mut failures) = (Vec::new(), Vec::new());
    for v in [Variant::QuasiLinear, Variant::Marked] {
        let mut reports = Vec::new();
        for &n in &ns {
            let res = extract(
                &size_family(n),
                ExtractConfig::new(v, InductionMode::Simultaneous),
            )
            .map_err(|e| e.to_string())?;
            reports.push(res.size_report().map_err(|e| e.to_string())?);
        }
        let ratios: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), r| (lo.min(*r), hi.max(*r)));
        let spread = (hi - lo) / lo;
        let worst = reports
            .windows(2)
            .map(|w| {
                let grow = w[1].extracted_size as f64 / w[0].extracted_size as f64;
                grow / (w[1].proof_size as f64 / w[0].proof_size as f64)
            })
            .fold(0.0, f64::max);
        let sizes: Vec<(usize, usize)> = reports
            .iter()
            .map(|r| (r.proof_size, r.extracted_size))
            .collect();
        let line = format!(
            "{v:?} sizes {sizes:?} ratios {ratios:.3?} spread {:.1}%, growth vs linear {worst:.2}x",
            spread * 100.0
        );
        if spread >= 0.15 || worst > 1.25 {
            failures.push(line);
        } else {
            detail.push(line);
        }
    }
    if failures.is_empty() {
        Ok(detail.join("; "))
    } else {
        failures.extend(detail);
        Err(failures.join("; "))
    }
}

fn search_bench(v: Variant, m: InductionMode, o: Orientation) -> Result<SearchBench, String> {
    let e = corpus_entry("linear-search").ok_or("missing linear-search")?;
    SearchBench::new(&e, ExtractConfig::new(v, m).with_orientation(o)).map_err(|e| e.to_string())
}

pub const BENCH_N: u64 = 128;

pub fn recursion_growth() -> Outcome {
    let n = BENCH_N;
    let eval = EvalConfig::default();
    let naive = search_bench(
        Variant::QuasiLinear,
        InductionMode::NaiveSeparate,
        Orientation::Last,
    )?
    .run(n, None, eval)
    .map_err(|e| e.to_string())?;
    let simul = search_bench(
        Variant::QuasiLinear,
        InductionMode::Simultaneous,
        Orientation::Last,
    )?
    .run(n, None, eval)
    .map_err(|e| e.to_string())?;
    let (lo, hi) = (n * n / 4, 4 * n);
    if naive.rec_unfolds < lo {
        return Err(format!("naive rec_unfolds {} < {lo}", naive.rec_unfolds));
    }
    if simul.rec_unfolds > hi {
        return Err(format!(
            "simultaneous rec_unfolds {} > {hi}",
            simul.rec_unfolds
        ));
    }
    Ok(format!(
        "n={n}: naive {} >= {lo}, simultaneous {} <= {hi}",
        naive.rec_unfolds, simul.rec_unfolds
    ))
}

pub const AVERAGE_TRIALS: usize = 200;
pub const AVERAGE_SEED: u64 = 2024;

pub fn early_termination() -> Outcome {
    let n = BENCH_N;
    let eval = EvalConfig::default();
    let flagged = search_bench(
        Variant::QuasiLinear,
        InductionMode::Flagged,
        Orientation::Last,
    )?;
    let marked = search_bench(Variant::Marked, InductionMode::Flagged, Orientation::First)?;
    let plain = search_bench(
        Variant::QuasiLinear,
        InductionMode::Simultaneous,
        Orientation::First,
    )?;
    let mut seen = Vec::new();
    for k in [0u64, 3, 16] {
        let f = flagged.run(n, Some(k), eval).map_err(|e| e.to_string())?;
        let m = marked.run(n, Some(k), eval).map_err(|e| e.to_string())?;
        let q = plain.run(n, Some(k), eval).map_err(|e| e.to_string())?;
        for (what, r) in [("flagged", &f), ("marked+flagged", &m)] {
            if r.tc_checks > k + 2 {
                return Err(format!(
                    "{what} K={k}: tc_checks {} > {}",
                    r.tc_checks,
                    k + 2
                ));
            }
            if r.verdict != "PASS" {
                return Err(format!("{what} K={k}: returned {:?}", r.counterexample));
            }
        }
        if q.tc_checks < n - 1 {
            return Err(format!(
                "quasi-linear K={k}: tc_checks {} < {}",
                q.tc_checks,
                n - 1
            ));
        }
        seen.push(format!(
            "K={k}: {}/{}/{}",
            f.tc_checks, m.tc_checks, q.tc_checks
        ));
    }
    let (s, _) = flagged
        .average(n, AVERAGE_TRIALS, KDist::Uniform, AVERAGE_SEED, eval)
        .map_err(|e| e.to_string())?;
    let target = (n - 1) as f64 / 2.0 + 1.0;
    let dev = (s.mean_tc_checks - target).abs() / target;
    if dev > 0.10 {
        return Err(format!(
            "mean tc_checks {:.2} deviates {:.1}% from {target}",
            s.mean_tc_checks,
            dev * 100.0
        ));
    }
    Ok(format!(
        "{}; mean over {} trials {:.2} vs {target} ({:.1}%)",
        seen.join(", "),
        s.trials,
        s.mean_tc_checks,
        dev * 100.0
    ))
}

/// Every `f : nat => nat` table over `0..=bound`, constant beyond.
pub fn all_tables(bound: u64) -> Vec<Vec<u64>> {
    let width = (bound + 1) as u32;
    let base = bound + 1;
    (0..base.pow(width))
        .map(|mut code| {
            (0..width)
                .map(|_| {
                    let d = code % base;
                    code /= base;
                    d
                })
                .collect()
        })
        .collect()
}

pub fn orientation_law(mode: InductionMode, variant: Variant) -> Outcome {
    let eval = EvalConfig::default();
    let last = search_bench(variant, mode, Orientation::Last)?;
    let first = search_bench(variant, mode, Orientation::First)?;
    let mut cases = 0;
    for table in all_tables(3) {
        let at = |i: u64| table[(i as usize).min(table.len() - 1)];
        let f = || {
            Value::table(Table::nat_list(
                table.iter().map(|&v| Value::Nat(v)).collect(),
            ))
        };
        for n in 0..=10u64 {
            // Candidate i refutes C exactly when f(i) = 0.
            let holds: Vec<bool> = (0..=n).map(|i| at(i) != 0).collect();
            for (bench, oracle, name) in [
                (&last, last_counterexample(&holds), "last"),
                (&first, first_counterexample(&holds), "first"),
            ] {
                let (got, _) = bench.search(n, f(), eval).map_err(|e| e.to_string())?;
                let ok = match (oracle, got) {
                    (Some(k), Some(d)) => k as u64 == d,
                    (None, Some(d)) => d <= n,
                    _ => false,
                };
                if !ok {
                    return Err(format!(
                        "{name} f={table:?} n={n}: got {got:?}, oracle {oracle:?}"
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} runs over 256 tables, n <= 10"))
}

pub const KERNEL_TERMS: u64 = 10_000;
pub const RANDOM_FORMULAS: u64 = 20;

pub fn kernel_and_derived() -> Outcome {
    use naw::logic::{check_proof_open, formula_eq, mk_efq, mk_stability};
    let mut size = 0;
    for seed in 0..KERNEL_TERMS {
        let (t, ty) = Gen::new(seed).typed_term();
        size += t.size();
        kernel_health(&t, &ty).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    for seed in 0..RANDOM_FORMULAS {
        let a = Gen::new(seed).formula(4);
        let efq = check_proof_open(&mk_efq(&a)).map_err(|e| e.to_string())?;
        if !formula_eq(&efq, &Formula::implies(Formula::falsity(), a.clone())) {
            return Err(format!("efq for {a} proves {efq}"));
        }
        let stab = check_proof_open(&mk_stability(&a)).map_err(|e| e.to_string())?;
        let want = Formula::implies(Formula::not(Formula::not(a.clone())), a.clone());
        if !formula_eq(&stab, &want) {
            return Err(format!("stability for {a} proves {stab}"));
        }
    }
    Ok(format!(
        "{KERNEL_TERMS} terms (mean size {:.1}), {RANDOM_FORMULAS} formulas",
        size as f64 / KERNEL_TERMS as f64
    ))
}

pub const EPS_TYPES: u64 = 1_000;

/// The twelve nulltype rules, each as a rewrite.
pub fn epsilon_rules() -> Result<usize, String> {
    use naw::kernel::{epsilon_simplify_type as st, type_of};
    let e = Type::Epsilon;
    let r = Term::var("r", Type::Mark);
    let tys = [
        (Type::prod(Type::Mark, e.clone()), Type::Mark),
        (Type::prod(e.clone(), Type::Mark), Type::Mark),
        (Type::arrow(Type::Mark, e.clone()), e.clone()),
        (Type::arrow(e.clone(), Type::Mark), Type::Mark),
    ];
    let mut n = 0;
    for (raw, want) in &tys {
        if st(raw) != *want {
            return Err(format!("{raw} simplified to {}", st(raw)));
        }
        n += 1;
    }
    let terms = [
        (
            Term::fst(Term::var("p", Type::prod(Type::Mark, e.clone()))),
            Term::var("p", Type::Mark),
        ),
        (
            Term::snd(Term::var("p", Type::prod(e.clone(), Type::Mark))),
            Term::var("p", Type::Mark),
        ),
        (Term::pair(r.clone(), Term::Eps), r.clone()),
        (Term::pair(Term::Eps, r.clone()), r.clone()),
        (Term::lam("z", Type::Nat, Term::Eps), Term::Eps),
        (Term::lam("z", e.clone(), r.clone()), r.clone()),
        (
            Term::app(
                Term::var("h", Type::arrow(Type::Nat, e.clone())),
                Term::zero(),
            ),
            Term::Eps,
        ),
        (
            Term::app(Term::var("k", Type::arrow(e, Type::Mark)), Term::Eps),
            Term::var("k", Type::Mark),
        ),
    ];
    for (raw, want) in &terms {
        type_of(raw).map_err(|err| format!("{raw}: {err}"))?;
        let got = epsilon_simplify_term(raw).map_err(|err| err.to_string())?;
        if got != *want {
            return Err(format!("{raw} simplified to {got}, want {want}"));
        }
        n += 1;
    }
    Ok(n)
}

pub fn epsilon_table() -> Outcome {
    let rules = epsilon_rules()?;
    if rules != 12 {
        return Err(format!("{rules} rules checked"));
    }
    for seed in 0..EPS_TYPES {
        let mut g = Gen::new(seed);
        let (a, b) = (g.ty_eps(3), g.ty_eps(2));
        epsilon_congruence(&a, &b).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!(
        "{rules} rules, congruence on {EPS_TYPES} random types"
    ))
}
