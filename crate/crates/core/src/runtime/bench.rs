use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eval::{EvalConfig, Evaluator, Instrumentation};
use super::value::{Ground, Table, Value};
use super::verify::VerifyError;
use super::CorpusEntry;
use crate::extract::{extract, ExtractConfig, Variant};
use crate::kernel::{canonical_inhabitant, epsilon_simplify_type, Name};

/// Distribution of the first zero of `f` in averaged runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KDist {
    Uniform,
    /// Success probability `p` per index, truncated to `[0, n)`.
    Geometric(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRecord {
    pub entry: String,
    pub variant: String,
    pub mode: String,
    pub n: u64,
    /// Position of the only zero of `f`; none means `f` has no zero.
    #[serde(rename = "K")]
    pub k: Option<u64>,
    pub tc_checks: u64,
    pub rec_unfolds: u64,
    pub beta_steps: u64,
    pub total_steps: u64,
    pub counterexample: Option<u64>,
    pub verdict: String,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str =
        "entry,variant,mode,n,K,tc_checks,rec_unfolds,beta_steps,verdict";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.entry,
            self.variant,
            self.mode,
            self.n,
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.tc_checks,
            self.rec_unfolds,
            self.beta_steps,
            self.verdict
        )
    }

    pub fn stats(&self) -> Instrumentation {
        Instrumentation {
            rec_unfolds: self.rec_unfolds,
            tc_checks: self.tc_checks,
            beta_steps: self.beta_steps,
            total_steps: self.total_steps,
        }
    }
}

/// `f` with a single zero at `k` (none if absent), 1 elsewhere.
pub fn search_table(n: u64, k: Option<u64>) -> Value {
    let vals = (0..=n)
        .map(|i| Value::Nat(if Some(i) == k { 0 } else { 1 }))
        .chain(std::iter::once(Value::Nat(1)))
        .collect();
    Value::table(Table::nat_list(vals))
}

/// Prepared search benchmark: the counterexample for the single
/// assumption of an induction over `n` searching a function `f`.
pub struct SearchBench {
    entry: String,
    cfg: ExtractConfig,
    minus: crate::kernel::Term,
    challenge: Option<Value>,
    marked: bool,
}

impl SearchBench {
    pub fn new(entry: &CorpusEntry, cfg: ExtractConfig) -> Result<Self, VerifyError> {
        let p = entry
            .proof()
            .map_err(|e| VerifyError::Shape(e.to_string(), entry.name.into()))?;
        let fv = p.fv();
        if !fv.contains("f") || !fv.contains("n") || p.fa().len() != 1 {
            return Err(VerifyError::NotASearch(entry.name.into()));
        }
        let res = extract(&p, cfg)?;
        let asm = res.assemble()?;
        let minus = asm.minus.into_values().next().expect("one assumption");
        let cty = epsilon_simplify_type(&res.challenge_ty);
        let challenge = if cty.is_epsilon() {
            None
        } else {
            let t = canonical_inhabitant(&cty);
            let mut ev = Evaluator::new(EvalConfig::default());
            Some(ev.eval(&t, &None)?)
        };
        Ok(SearchBench {
            entry: entry.name.into(),
            cfg,
            minus,
            challenge,
            marked: cfg.variant == Variant::Marked,
        })
    }

    /// The counterexample found for `f` and `n`, with its cost.
    pub fn search(
        &self,
        n: u64,
        f: Value,
        eval: EvalConfig,
    ) -> Result<(Option<u64>, Instrumentation), VerifyError> {
        let mut b: BTreeMap<Name, Value> = BTreeMap::new();
        b.insert("f".into(), f);
        b.insert("n".into(), Value::Nat(n));
        let env = Evaluator::env_of(&b);
        let mut ev = Evaluator::new(eval);
        let args: Vec<Value> = self.challenge.iter().cloned().collect();
        let g = ev.run(&self.minus, &args, &env)?;
        let value = match g {
            Ground::Pair(_, s) if self.marked => *s,
            other => other,
        };
        Ok((value.as_nat(), ev.stats))
    }

    pub fn run(
        &self,
        n: u64,
        k: Option<u64>,
        eval: EvalConfig,
    ) -> Result<BenchRecord, VerifyError> {
        let (d, stats) = self.search(n, search_table(n, k), eval)?;
        let verdict = match (k, d) {
            (Some(k), Some(d)) if d == k => "PASS",
            (None, Some(_)) => "PASS",
            _ => "FAIL",
        };
        Ok(BenchRecord {
            entry: self.entry.clone(),
            variant: format!("{:?}", self.cfg.variant),
            mode: format!("{:?}", self.cfg.mode),
            n,
            k,
            tc_checks: stats.tc_checks,
            rec_unfolds: stats.rec_unfolds,
            beta_steps: stats.beta_steps,
            total_steps: stats.total_steps,
            counterexample: d,
            verdict: verdict.into(),
        })
    }
}

pub fn bench_induction(
    entry: &CorpusEntry,
    n: u64,
    k: Option<u64>,
    cfg: ExtractConfig,
) -> Result<BenchRecord, VerifyError> {
    SearchBench::new(entry, cfg)?.run(n, k, EvalConfig::default())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AverageSummary {
    pub trials: usize,
    pub mean_k: f64,
    pub mean_tc_checks: f64,
    pub median_tc_checks: f64,
    pub mean_rec_unfolds: f64,
    pub median_rec_unfolds: f64,
    pub failures: usize,
}

fn draw_k(dist: KDist, n: u64, rng: &mut ChaCha8Rng) -> u64 {
    match dist {
        KDist::Uniform => rng.gen_range(0..n),
        KDist::Geometric(p) => {
            let mut k = 0;
            while k + 1 < n && !rng.gen_bool(p) {
                k += 1;
            }
            k
        }
    }
}

fn median(xs: &mut [u64]) -> f64 {
    xs.sort_unstable();
    let m = xs.len() / 2;
    if xs.is_empty() {
        0.0
    } else if xs.len() % 2 == 1 {
        xs[m] as f64
    } else {
        (xs[m - 1] + xs[m]) as f64 / 2.0
    }
}

/// Mean and median costs over `trials` runs, the zero of `f` drawn from
/// `dist` with a seeded generator.
pub fn bench_average(
    entry: &CorpusEntry,
    n: u64,
    trials: usize,
    dist: KDist,
    seed: u64,
    cfg: ExtractConfig,
) -> Result<(AverageSummary, Vec<BenchRecord>), VerifyError> {
    SearchBench::new(entry, cfg)?.average(n, trials, dist, seed, EvalConfig::default())
}

impl SearchBench {
    pub fn average(
        &self,
        n: u64,
        trials: usize,
        dist: KDist,
        seed: u64,
        eval: EvalConfig,
    ) -> Result<(AverageSummary, Vec<BenchRecord>), VerifyError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut records = Vec::with_capacity(trials);
        for _ in 0..trials {
            let k = draw_k(dist, n, &mut rng);
            records.push(self.run(n, Some(k), eval)?);
        }
        let t = trials.max(1) as f64;
        let mut tc: Vec<u64> = records.iter().map(|r| r.tc_checks).collect();
        let mut ru: Vec<u64> = records.iter().map(|r| r.rec_unfolds).collect();
        let summary = AverageSummary {
            trials,
            mean_k: records.iter().map(|r| r.k.unwrap_or(0) as f64).sum::<f64>() / t,
            mean_tc_checks: tc.iter().sum::<u64>() as f64 / t,
            median_tc_checks: median(&mut tc),
            mean_rec_unfolds: ru.iter().sum::<u64>() as f64 / t,
            median_rec_unfolds: median(&mut ru),
            failures: records.iter().filter(|r| r.verdict != "PASS").count(),
        };
        Ok((summary, records))
    }
}
