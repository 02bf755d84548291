use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use naw::extract::{extract, ExtractConfig, InductionMode, Orientation, Variant};
use naw::interp::{tau, Interp};
use naw::kernel::type_of;
use naw::logic::{check_proof_open, Proof};
use naw::runtime::{
    corpus_entry, AverageSummary, BenchRecord, EvalConfig, Evaluator, FiniteModel, KDist,
    SearchBench, ValueRepr, VerdictRecord, Verifier,
};
use naw::syntax::{parse_document, Document};

const SCHEMA: u32 = 1;

/// `println!` that exits quietly once stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "naw",
    version,
    about = "Proof checking and Dialectica extraction"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Out::Pretty)]
    out: Out,
    /// Evaluation step limit.
    #[arg(long, global = true, default_value_t = EvalConfig::default().fuel)]
    fuel: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and check every item of a file.
    Check { file: String },
    /// Computational types of the conclusion and open assumptions.
    ShowTypes {
        file: String,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Extract and print the witnessing terms.
    Extract {
        file: String,
        #[command(flatten)]
        ex: ExtractArgs,
    },
    /// Evaluate the last term of a file in a model.
    Eval {
        file: String,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Seed for free variables the model leaves open.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the extracted program on model instances.
    Verify {
        file: String,
        #[command(flatten)]
        ex: ExtractArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Sample count when the instance space is not enumerated.
        #[arg(long)]
        budget: Option<usize>,
        /// Re-run instances recorded in a JSON-lines file.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Counterexample-search costs on a search entry.
    Bench {
        entry: String,
        #[command(flatten)]
        ex: ExtractArgs,
        #[arg(long, default_value_t = 128)]
        n: u64,
        /// Position of the zero of `f`; without it, `--trials` runs are drawn.
        #[arg(long)]
        k: Option<u64>,
        /// Run once with no zero at all.
        #[arg(long, conflicts_with = "k")]
        no_zero: bool,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = DistArg::Uniform)]
        dist: DistArg,
        /// Per-index probability for the geometric distribution.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone, Copy)]
struct ExtractArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Quasilinear)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Simultaneous)]
    induction: ModeArg,
    #[arg(long, value_enum, default_value_t = OrientArg::Last)]
    orientation: OrientArg,
    /// Reject induction nodes where the requested mode cannot apply.
    #[arg(long)]
    strict: bool,
}

impl ExtractArgs {
    fn config(self) -> ExtractConfig {
        ExtractConfig {
            variant: match self.variant {
                VariantArg::Quasilinear => Variant::QuasiLinear,
                VariantArg::Marked => Variant::Marked,
            },
            mode: match self.induction {
                ModeArg::Naive => InductionMode::NaiveSeparate,
                ModeArg::Simultaneous => InductionMode::Simultaneous,
                ModeArg::Flagged => InductionMode::Flagged,
            },
            orientation: match self.orientation {
                OrientArg::Last => Orientation::Last,
                OrientArg::First => Orientation::First,
            },
            strict_mode: self.strict,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Quasilinear,
    Marked,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Naive,
    Simultaneous,
    Flagged,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrientArg {
    Last,
    First,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistArg {
    Uniform,
    Geometric,
}

/// Failure kinds, mapped to exit codes.
enum Failure {
    /// Check failure or a FAIL verdict.
    Verdict(String),
    /// Bad input: unreadable or unparsable files, bad models.
    Usage(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }
    fn verdict(e: impl std::fmt::Display) -> Self {
        Failure::Verdict(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    out: Out,
    eval: EvalConfig,
}

impl Ctx {
    fn json(&self, command: &str, mut body: Json) {
        if let Json::Object(m) = &mut body {
            m.insert("schema".into(), json!(SCHEMA));
            m.insert("command".into(), json!(command));
        }
        out!("{body}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        out: cli.out,
        eval: EvalConfig {
            fuel: cli.fuel,
            ..EvalConfig::default()
        },
    };
    let res = stacker::maybe_grow(1 << 20, 64 << 20, || run(&ctx, cli.cmd));
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verdict(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(ctx: &Ctx, cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Check { file } => check(ctx, &file),
        Cmd::ShowTypes { file, variant } => show_types(ctx, &file, variant),
        Cmd::Extract { file, ex } => extract_cmd(ctx, &file, ex.config()),
        Cmd::Eval { file, model, seed } => eval_cmd(ctx, &file, model.as_deref(), seed),
        Cmd::Verify {
            file,
            ex,
            model,
            budget,
            replay,
        } => verify_cmd(
            ctx,
            &file,
            ex.config(),
            model.as_deref(),
            budget,
            replay.as_deref(),
        ),
        Cmd::Bench {
            entry,
            ex,
            n,
            k,
            no_zero,
            trials,
            dist,
            p,
            seed,
        } => {
            let dist = match dist {
                DistArg::Uniform => KDist::Uniform,
                DistArg::Geometric => KDist::Geometric(p),
            };
            bench_cmd(ctx, &entry, ex.config(), n, k, no_zero, trials, dist, seed)
        }
    }
}

/// Reads a file, or a corpus entry when no such file exists.
fn load(file: &str) -> Result<Document, Failure> {
    let path = Path::new(file);
    let src = if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{file}: {e}")))?
    } else if let Some(e) = corpus_entry(file) {
        e.source.to_string()
    } else {
        return Err(Failure::usage(format!(
            "{file}: no such file or corpus entry"
        )));
    };
    parse_document(&src).map_err(|e| Failure::usage(format!("{file}:{e}")))
}

fn load_proof(file: &str) -> Result<Proof, Failure> {
    let doc = load(file)?;
    let p = doc
        .proof()
        .cloned()
        .ok_or_else(|| Failure::usage(format!("{file}: no proof")))?;
    check_proof_open(&p).map_err(Failure::verdict)?;
    Ok(p)
}

fn load_model(path: Option<&Path>) -> Result<FiniteModel, Failure> {
    match path {
        Some(p) => {
            FiniteModel::load(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        None => Ok(FiniteModel::default()),
    }
}

fn check(ctx: &Ctx, file: &str) -> Outcome {
    let doc = load(file)?;
    let mut items = Vec::new();
    let mut ok = true;
    for item in &doc.items {
        let (kind, res) = match item {
            naw::syntax::Item::Proof(p) => (
                "proof",
                check_proof_open(p)
                    .map(|a| a.to_string())
                    .map_err(|e| e.to_string()),
            ),
            naw::syntax::Item::Term(t) => (
                "term",
                type_of(t)
                    .map(|ty| ty.to_string())
                    .map_err(|e| e.to_string()),
            ),
        };
        ok &= res.is_ok();
        items.push((kind, res));
    }
    match ctx.out {
        Out::Json => {
            let list: Vec<Json> = items
                .iter()
                .map(|(k, r)| match r {
                    Ok(s) => json!({"kind": k, "ok": true, "result": s}),
                    Err(e) => json!({"kind": k, "ok": false, "error": e}),
                })
                .collect();
            ctx.json("check", json!({"ok": ok, "items": list}));
        }
        Out::Csv => {
            out!("kind,ok,result");
            for (k, r) in &items {
                let (flag, s) = match r {
                    Ok(s) => (true, s),
                    Err(e) => (false, e),
                };
                out!("{k},{flag},{}", csv_field(s));
            }
        }
        Out::Pretty => {
            for (k, r) in &items {
                match r {
                    Ok(s) => out!("{k} ok: {s}"),
                    Err(e) => out!("{k} FAILED: {e}"),
                }
            }
        }
    }
    Ok(ok)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn show_types(ctx: &Ctx, file: &str, variant: Option<VariantArg>) -> Outcome {
    let p = load_proof(file)?;
    let conclusion = check_proof_open(&p).map_err(Failure::verdict)?;
    let variants: Vec<Interp> = match variant {
        Some(VariantArg::Quasilinear) => vec![Interp::Plain],
        Some(VariantArg::Marked) => vec![Interp::Marked],
        None => vec![Interp::Plain, Interp::Marked],
    };
    let mut rows = vec![("conclusion".to_string(), conclusion)];
    rows.extend(p.fa().into_iter().map(|(u, c)| (u.to_string(), c)));
    let mut out = Vec::new();
    for v in &variants {
        for (who, a) in &rows {
            let t = tau(a, *v);
            out.push(json!({
                "variant": match v {
                    Interp::Plain => "quasilinear",
                    Interp::Marked => "marked",
                },
                "formula": who,
                "text": a.to_string(),
                "plus": t.plus.to_string(),
                "minus": t.minus.to_string(),
                "star": t.star.to_string(),
                "marked": t.marked.map(|m| m.to_string()),
            }));
        }
    }
    match ctx.out {
        Out::Json => ctx.json("show-types", json!({"types": out})),
        Out::Csv => {
            out!("variant,formula,plus,minus,star");
            for r in &out {
                out!(
                    "{},{},{},{},{}",
                    r["variant"].as_str().unwrap_or_default(),
                    r["formula"].as_str().unwrap_or_default(),
                    csv_field(r["plus"].as_str().unwrap_or_default()),
                    csv_field(r["minus"].as_str().unwrap_or_default()),
                    csv_field(r["star"].as_str().unwrap_or_default()),
                );
            }
        }
        Out::Pretty => {
            for r in &out {
                out!(
                    "[{}] {}: {}",
                    r["variant"].as_str().unwrap_or_default(),
                    r["formula"].as_str().unwrap_or_default(),
                    r["text"].as_str().unwrap_or_default()
                );
                out!("  tau+ = {}", r["plus"].as_str().unwrap_or_default());
                out!("  tau- = {}", r["minus"].as_str().unwrap_or_default());
                out!("  tau* = {}", r["star"].as_str().unwrap_or_default());
                if let Some(m) = r["marked"].as_str() {
                    out!("  marked = {m}");
                }
            }
        }
    }
    Ok(true)
}

fn extract_cmd(ctx: &Ctx, file: &str, cfg: ExtractConfig) -> Outcome {
    let p = load_proof(file)?;
    let res = extract(&p, cfg).map_err(Failure::verdict)?;
    let asm = res.assemble().map_err(Failure::verdict)?;
    let size = res.size_report().map_err(Failure::verdict)?;
    let minus: BTreeMap<String, String> = asm
        .minus
        .iter()
        .map(|(u, t)| (u.to_string(), t.to_string()))
        .collect();
    match ctx.out {
        Out::Json => ctx.json(
            "extract",
            json!({
                "conclusion": res.conclusion.to_string(),
                "full": asm.full.to_string(),
                "plus": asm.plus.to_string(),
                "minus": minus,
                "fallbacks": res.fallbacks,
                "size": size,
            }),
        ),
        Out::Csv => {
            out!("proof_size,msl,extracted_size,ratio,fallbacks");
            out!(
                "{},{},{},{:.4},{}",
                size.proof_size,
                size.msl,
                size.extracted_size,
                size.ratio,
                res.fallbacks
            );
        }
        Out::Pretty => {
            out!("conclusion: {}", res.conclusion);
            out!("plus: {}", asm.plus);
            for (u, t) in &minus {
                out!("minus {u}: {t}");
            }
            out!(
                "size: proof {} msl {} extracted {} ratio {:.3}",
                size.proof_size,
                size.msl,
                size.extracted_size,
                size.ratio
            );
            if res.fallbacks > 0 {
                out!("general scheme used at {} induction node(s)", res.fallbacks);
            }
        }
    }
    Ok(true)
}

fn eval_cmd(ctx: &Ctx, file: &str, model: Option<&Path>, seed: Option<u64>) -> Outcome {
    let doc = load(file)?;
    let t = doc
        .term()
        .cloned()
        .ok_or_else(|| Failure::usage(format!("{file}: no term")))?;
    type_of(&t).map_err(Failure::verdict)?;
    let model = load_model(model)?;
    let mut rng = match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => model.rng(),
    };
    let mut bindings = model.bindings.clone();
    let mut drawn = BTreeMap::new();
    for (x, ty) in t.free_vars_typed() {
        if let std::collections::btree_map::Entry::Vacant(slot) = bindings.entry(x) {
            let v = model.random_value(&ty, &mut rng);
            if let Some(r) = ValueRepr::of(&v) {
                drawn.insert(slot.key().to_string(), r);
            }
            slot.insert(v);
        }
    }
    let mut ev = Evaluator::new(ctx.eval);
    let env = Evaluator::env_of(&bindings);
    let g = ev.run(&t, &[], &env).map_err(Failure::verdict)?;
    match ctx.out {
        Out::Json => ctx.json(
            "eval",
            json!({"value": g, "text": g.to_string(), "instance": drawn, "stats": ev.stats}),
        ),
        Out::Csv => {
            out!("value,tc_checks,rec_unfolds,beta_steps,total_steps");
            let s = ev.stats;
            out!(
                "{},{},{},{},{}",
                csv_field(&g.to_string()),
                s.tc_checks,
                s.rec_unfolds,
                s.beta_steps,
                s.total_steps
            );
        }
        Out::Pretty => {
            for (x, r) in &drawn {
                out!("{x} := {r}");
            }
            out!("{g}");
            let s = ev.stats;
            out!(
                "steps {} beta {} rec {} checks {}",
                s.total_steps,
                s.beta_steps,
                s.rec_unfolds,
                s.tc_checks
            );
        }
    }
    Ok(true)
}

fn verify_cmd(
    ctx: &Ctx,
    file: &str,
    cfg: ExtractConfig,
    model: Option<&Path>,
    budget: Option<usize>,
    replay: Option<&Path>,
) -> Outcome {
    let p = load_proof(file)?;
    let model = load_model(model)?;
    let mut v = Verifier::new(&p, cfg).map_err(Failure::verdict)?;
    v.eval_cfg = ctx.eval;
    if let Some(path) = replay {
        return replay_cmd(ctx, &v, &model, path);
    }
    let budget = budget.unwrap_or(model.sample_budget);
    let report = v.verify(&model, budget).map_err(Failure::verdict)?;
    let ok = report.all_pass();
    match ctx.out {
        Out::Json => {
            ctx.json("verify", json!({"verdict": verdict(ok), "report": report}));
            for f in &report.failures {
                ctx.json("verify-failure", json!({"record": f}));
            }
        }
        Out::Csv => {
            out!("variant,instances,exhaustive,passed,premise_held,tc_checks,rec_unfolds,beta_steps,verdict");
            let s = report.stats;
            out!(
                "{},{},{},{},{},{},{},{},{}",
                report.variant,
                report.instances,
                report.exhaustive,
                report.passed,
                report.premise_held,
                s.tc_checks,
                s.rec_unfolds,
                s.beta_steps,
                verdict(ok)
            );
        }
        Out::Pretty => {
            out!(
                "{}: {}/{} instances passed ({}), premise held in {}",
                report.variant,
                report.passed,
                report.instances,
                if report.exhaustive {
                    "exhaustive"
                } else {
                    "sampled"
                },
                report.premise_held
            );
            for f in &report.failures {
                out!("FAIL at {}", instance_text(f));
            }
            out!("{}", verdict(ok));
        }
    }
    Ok(ok)
}

fn instance_text(r: &VerdictRecord) -> String {
    r.instance
        .iter()
        .map(|(x, v)| format!("{x} := {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Each line is either a recorded verdict, a `verify-failure` JSON line, or
/// a bare instance object.
fn replay_cmd(ctx: &Ctx, v: &Verifier, model: &FiniteModel, path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut ok = true;
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let j: Json = serde_json::from_str(line)
            .map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let inst = j
            .get("record")
            .unwrap_or(&j)
            .get("instance")
            .unwrap_or(&j)
            .clone();
        let inst: BTreeMap<String, ValueRepr> = serde_json::from_value(inst)
            .map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let r = v.replay(model, &inst).map_err(Failure::verdict)?;
        ok &= r.pass;
        match ctx.out {
            Out::Json => ctx.json("replay", json!({"verdict": verdict(r.pass), "record": r})),
            Out::Csv => out!(
                "{},{},{},{}",
                i + 1,
                r.premise,
                r.conclusion,
                verdict(r.pass)
            ),
            Out::Pretty => out!("{}: {} at {}", i + 1, verdict(r.pass), instance_text(&r)),
        }
    }
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn bench_cmd(
    ctx: &Ctx,
    entry: &str,
    cfg: ExtractConfig,
    n: u64,
    k: Option<u64>,
    no_zero: bool,
    trials: usize,
    dist: KDist,
    seed: u64,
) -> Outcome {
    let e = corpus_entry(entry)
        .ok_or_else(|| Failure::usage(format!("unknown corpus entry `{entry}`")))?;
    if n == 0 {
        return Err(Failure::usage("--n must be positive"));
    }
    let bench = SearchBench::new(&e, cfg).map_err(Failure::usage)?;
    let records: Vec<BenchRecord>;
    let mut summary: Option<AverageSummary> = None;
    if k.is_some() || no_zero {
        records = vec![bench.run(n, k, ctx.eval).map_err(Failure::verdict)?];
    } else {
        let (s, rs) = bench
            .average(n, trials, dist, seed, ctx.eval)
            .map_err(Failure::verdict)?;
        summary = Some(s);
        records = rs;
    }
    let ok = records.iter().all(|r| r.verdict == "PASS");
    match ctx.out {
        Out::Json => {
            for r in &records {
                ctx.json("bench", json!({"record": r}));
            }
            if let Some(s) = &summary {
                ctx.json("bench-summary", json!({"summary": s}));
            }
        }
        Out::Csv => {
            out!("{}", BenchRecord::CSV_HEADER);
            for r in &records {
                out!("{}", r.csv_row());
            }
        }
        Out::Pretty => {
            if let Some(s) = &summary {
                out!(
                    "{} trials, mean K {:.2}: checks mean {:.2} median {:.1}; unfolds mean {:.2} median {:.1}; {} failure(s)",
                    s.trials,
                    s.mean_k,
                    s.mean_tc_checks,
                    s.median_tc_checks,
                    s.mean_rec_unfolds,
                    s.median_rec_unfolds,
                    s.failures
                );
            } else {
                for r in &records {
                    out!(
                        "{} {} {} n={} K={}: checks {} unfolds {} beta {} counterexample {} {}",
                        r.entry,
                        r.variant,
                        r.mode,
                        r.n,
                        r.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
                        r.tc_checks,
                        r.rec_unfolds,
                        r.beta_steps,
                        r.counterexample
                            .map(|d| d.to_string())
                            .unwrap_or_else(|| "-".into()),
                        r.verdict
                    );
                }
            }
        }
    }
    Ok(ok)
}
