use serde::Serialize;

use crate::kernel::{Term, Type};
use crate::logic::{Formula, Proof};
use crate::syntax::{parse_proof, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    UsesContraction,
    NatInduction,
    /// The conclusion has no negative content.
    EpsilonChallenge,
    HigherOrderChallenge,
    BoolCases,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub file: &'static str,
    #[serde(skip)]
    pub source: &'static str,
    pub tags: &'static [Tag],
    /// Quasi-linear `tau+` and `tau-` of the conclusion, simplified.
    pub expected_types: (&'static str, &'static str),
}

impl CorpusEntry {
    pub fn proof(&self) -> Result<Proof, ParseError> {
        parse_proof(self.source)
    }

    pub fn has(&self, t: Tag) -> bool {
        self.tags.contains(&t)
    }
}

macro_rules! entry {
    ($name:literal, $tags:expr, $plus:literal, $minus:literal) => {
        CorpusEntry {
            name: $name,
            file: concat!("corpus/", $name, ".naw"),
            source: include_str!(concat!("../../corpus/", $name, ".naw")),
            tags: $tags,
            expected_types: ($plus, $minus),
        }
    };
}

pub fn corpus() -> Vec<CorpusEntry> {
    use Tag::*;
    vec![
        entry!("identity", &[], "nat", "nat"),
        entry!("weakening", &[], "(* nat nat)", "nat"),
        entry!(
            "contraction",
            &[UsesContraction, EpsilonChallenge],
            "eps",
            "eps"
        ),
        entry!(
            "linear-search",
            &[UsesContraction, NatInduction, EpsilonChallenge],
            "nat",
            "eps"
        ),
        entry!("bool-cases", &[BoolCases, EpsilonChallenge], "eps", "eps"),
        entry!(
            "higher-order",
            &[HigherOrderChallenge],
            "(* nat (* nat nat))",
            "(-> (* nat nat) nat)"
        ),
        entry!(
            "nested-induction",
            &[UsesContraction, NatInduction],
            "eps",
            "nat"
        ),
    ]
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

/// `P_n`: `n` chained applications of `w : all k. at(g k) -> at(g k)`,
/// instantiated at `z`, to `v : at(g z)`. At most two open assumptions and
/// no numerals, so the proof grows linearly in `n`.
pub fn size_family(n: usize) -> Proof {
    let g = Term::var("g", Type::arrow(Type::Nat, Type::Bool));
    let at = |k: Term| Formula::atom(Term::app(g.clone(), k));
    let kv = Term::var("k", Type::Nat);
    let z = Term::var("z", Type::Nat);
    let w = Formula::forall("k", Type::Nat, Formula::implies(at(kv.clone()), at(kv)));
    let mut p = Proof::assume("v", at(z.clone()));
    for _ in 0..n {
        p = Proof::imp_elim(Proof::all_elim(Proof::assume("w", w.clone()), z.clone()), p);
    }
    p
}
