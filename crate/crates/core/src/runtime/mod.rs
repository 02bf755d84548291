//! Evaluation, finite models, instance verification and benchmarks.

mod bench;
mod corpus;
mod eval;
mod model;
mod oracle;
mod value;
mod verify;

use thiserror::Error;

pub use bench::{
    bench_average, bench_induction, search_table, AverageSummary, BenchRecord, KDist, SearchBench,
};
pub use corpus::{corpus, corpus_entry, size_family, CorpusEntry, Tag};
pub use eval::{evaluate, EvalConfig, EvalStrategy, Evaluator, Instrumentation};
pub use model::{is_first_order, FiniteModel, ModelError, ModelSpec, EXHAUSTIVE_LIMIT};
pub use oracle::{first_counterexample, last_counterexample};
pub use value::{Env, Ground, Mark, Table, Thunk, Value, ValueRepr};
pub use verify::{sequent, verify_proof, VerdictRecord, Verifier, VerifyError, VerifyReport};

use crate::kernel::Name;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation did not finish within {0} steps")]
    FuelExhausted(u64),
    #[error("no model value for free variable `{0}`")]
    UnboundModelVariable(Name),
    #[error("evaluation stuck: {0}")]
    Stuck(String),
    #[error("expected first-order data, found {0}")]
    NotGround(String),
}
