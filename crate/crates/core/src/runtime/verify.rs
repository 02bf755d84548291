use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::eval::{EvalConfig, Evaluator, Instrumentation};
use super::model::FiniteModel;
use super::value::{Env, Ground, Mark, Value, ValueRepr};
use super::EvalError;
use crate::extract::{extract, Assembled, ExtractConfig, ExtractError, ExtractionResult, Variant};
use crate::interp::{characteristic_term, tau, tau_minus_raw};
use crate::kernel::{epsilon_simplify_type, KernelError, Name, Term, Type};
use crate::logic::{Formula, Proof};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("unexpected value {0} for {1}")]
    Shape(String, String),
    #[error("`{0}` is not a search entry (needs free f, n and one assumption)")]
    NotASearch(String),
}

struct AssumptionCheck {
    name: Name,
    param: Option<(Name, Type)>,
    /// `T_C`, erased.
    tc: Term,
    value_is_eps: bool,
    minus: Term,
}

/// Extracted program of one proof, ready for instance checks.
pub struct Verifier {
    pub result: ExtractionResult,
    pub assembled: Assembled,
    variant: Variant,
    /// `T_A`, erased.
    ta: Term,
    star_is_eps: bool,
    challenge_ty: Type,
    assumptions: Vec<AssumptionCheck>,
    /// Free object variables to instantiate, with their types.
    pub object_vars: Vec<(Name, Type)>,
    pub eval_cfg: EvalConfig,
}

/// Outcome of one instance. Marker fields are empty for the quasi-linear
/// variant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub instance: BTreeMap<String, ValueRepr>,
    /// Every assumption holds at its counterexample (for the marked
    /// variant: every one not marked `tt`).
    pub premise: bool,
    pub conclusion: bool,
    /// Every counterexample marked `ff` refutes its assumption.
    pub condition_ii: bool,
    pub markers: BTreeMap<String, Mark>,
    pub counterexamples: BTreeMap<String, Ground>,
    pub pass: bool,
    pub stats: Instrumentation,
}

impl Verifier {
    pub fn new(p: &Proof, cfg: ExtractConfig) -> Result<Self, VerifyError> {
        let result = extract(p, cfg)?;
        let assembled = result.assemble()?;
        let v = cfg.variant.interp();
        let a = &result.conclusion;
        let ct = tau(a, v);
        let ta = characteristic_term(a, v)?;
        let mut names = BTreeSet::new();
        let mut object_vars: Vec<(Name, Type)> = Vec::new();
        let mut note = |t: &Term, skip: &BTreeSet<Name>| {
            for (x, ty) in t.free_vars_typed() {
                if !skip.contains(&x) && names.insert(x.clone()) {
                    object_vars.push((x, ty));
                }
            }
        };
        let mut params = BTreeSet::new();
        let mut assumptions = Vec::new();
        for (u, (c, x)) in &result.assumptions {
            let Term::Var(xn, xty) = x else {
                unreachable!()
            };
            params.insert(xn.clone());
            let sty = epsilon_simplify_type(xty);
            assumptions.push(AssumptionCheck {
                name: u.clone(),
                param: (!sty.is_epsilon()).then(|| (xn.clone(), sty)),
                tc: characteristic_term(c, v)?,
                value_is_eps: epsilon_simplify_type(&tau_minus_raw(c, v)).is_epsilon(),
                minus: assembled.minus[u].clone(),
            });
        }
        note(&ta, &params);
        note(&assembled.plus, &params);
        for a in &assumptions {
            note(&a.tc, &params);
            note(&a.minus, &params);
        }
        object_vars.sort();
        Ok(Verifier {
            variant: cfg.variant,
            ta,
            star_is_eps: ct.star.is_epsilon(),
            challenge_ty: ct.minus,
            assumptions,
            object_vars,
            eval_cfg: EvalConfig::default(),
            assembled,
            result,
        })
    }

    /// Every variable an instance assigns: free object variables not fixed
    /// by the model, assumption parameters, then the challenge `%y`.
    pub fn instance_vars(&self, model: &FiniteModel) -> Vec<(Name, Type)> {
        let mut out: Vec<(Name, Type)> = self
            .object_vars
            .iter()
            .filter(|(x, _)| !model.bindings.contains_key(x))
            .cloned()
            .collect();
        for a in &self.assumptions {
            if let Some(p) = &a.param {
                out.push(p.clone());
            }
        }
        if !self.challenge_ty.is_epsilon() {
            out.push((Name::from("%y"), self.challenge_ty.clone()));
        }
        out
    }

    /// Checks one instance; `values` follows [`Verifier::instance_vars`].
    pub fn verify_instance(
        &self,
        model: &FiniteModel,
        vars: &[(Name, Type)],
        values: &[Value],
    ) -> Result<VerdictRecord, VerifyError> {
        let mut bindings = model.bindings.clone();
        let mut y = None;
        let mut instance = BTreeMap::new();
        for ((x, _), v) in vars.iter().zip(values) {
            if let Some(r) = ValueRepr::of(v) {
                instance.insert(x.to_string(), r);
            }
            if &**x == "%y" {
                y = Some(v.clone());
            } else {
                bindings.insert(x.clone(), v.clone());
            }
        }
        let env: Env = Evaluator::env_of(&bindings);
        let mut ev = Evaluator::new(self.eval_cfg);
        let ys: Vec<Value> = y.into_iter().collect();

        let mut premise = true;
        let mut condition_ii = true;
        let mut markers = BTreeMap::new();
        let mut counterexamples = BTreeMap::new();
        for a in &self.assumptions {
            let d = ev.run(&a.minus, &ys, &env)?;
            let (mark, s) = match self.variant {
                Variant::QuasiLinear => (None, d),
                Variant::Marked if a.value_is_eps => match d {
                    Ground::Mark(m) => (Some(m), Ground::Eps),
                    other => return Err(VerifyError::Shape(other.to_string(), a.name.to_string())),
                },
                Variant::Marked => match d {
                    Ground::Pair(m, s) => match *m {
                        Ground::Mark(m) => (Some(m), *s),
                        other => {
                            return Err(VerifyError::Shape(other.to_string(), a.name.to_string()))
                        }
                    },
                    other => return Err(VerifyError::Shape(other.to_string(), a.name.to_string())),
                },
            };
            let mut args = Vec::new();
            if let Some((x, _)) = &a.param {
                args.push(bindings[x].clone());
            }
            if !a.value_is_eps {
                args.push(s.to_value());
            }
            let holds = as_bool(ev.run(&a.tc, &args, &env)?, &a.name)?;
            match mark {
                None => premise &= holds,
                Some(m) => {
                    if m != Mark::Tt {
                        premise &= holds;
                    }
                    if m == Mark::Ff {
                        condition_ii &= !holds;
                    }
                    markers.insert(a.name.to_string(), m);
                }
            }
            counterexamples.insert(a.name.to_string(), s);
        }

        let mut args = Vec::new();
        if !self.star_is_eps {
            args.push(ev.eval(&self.assembled.plus, &env)?);
        }
        args.extend(ys.iter().cloned());
        let conclusion = as_bool(ev.run(&self.ta, &args, &env)?, "conclusion")?;
        Ok(VerdictRecord {
            instance,
            premise,
            conclusion,
            condition_ii,
            markers,
            counterexamples,
            pass: (!premise || conclusion) && condition_ii,
            stats: ev.stats,
        })
    }
}

fn as_bool(g: Ground, what: &str) -> Result<bool, VerifyError> {
    g.as_bool()
        .ok_or_else(|| VerifyError::Shape(g.to_string(), what.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub variant: String,
    pub instances: usize,
    pub exhaustive: bool,
    pub passed: usize,
    /// Instances where the premise held, so the conclusion was tested.
    pub premise_held: usize,
    pub failures: Vec<VerdictRecord>,
    pub stats: Instrumentation,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Verifier {
    /// Checks soundness at every instance of `model` (exhaustive when the
    /// space is small, otherwise `budget` samples).
    pub fn verify(&self, model: &FiniteModel, budget: usize) -> Result<VerifyReport, VerifyError> {
        let vars = self.instance_vars(model);
        let (rows, exhaustive) = model.instances(&vars, budget);
        let mut report = VerifyReport {
            variant: format!("{:?}", self.variant),
            instances: rows.len(),
            exhaustive,
            passed: 0,
            premise_held: 0,
            failures: Vec::new(),
            stats: Instrumentation::default(),
        };
        for row in &rows {
            let verdict = self.verify_instance(model, &vars, row)?;
            report.stats += verdict.stats;
            if verdict.premise {
                report.premise_held += 1;
            }
            if verdict.pass {
                report.passed += 1;
            } else {
                report.failures.push(verdict);
            }
        }
        Ok(report)
    }

    /// Re-runs a recorded instance.
    pub fn replay(
        &self,
        model: &FiniteModel,
        instance: &BTreeMap<String, ValueRepr>,
    ) -> Result<VerdictRecord, VerifyError> {
        let vars = self.instance_vars(model);
        let row = vars
            .iter()
            .map(|(x, _)| {
                instance
                    .get(&**x)
                    .map(ValueRepr::to_value)
                    .ok_or_else(|| VerifyError::Shape("missing".into(), x.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.verify_instance(model, &vars, &row)
    }
}

pub fn verify_proof(
    p: &Proof,
    cfg: ExtractConfig,
    model: &FiniteModel,
    budget: usize,
) -> Result<VerifyReport, VerifyError> {
    Verifier::new(p, cfg)?.verify(model, budget)
}

/// The conclusion and assumptions of a proof, for reporting.
pub fn sequent(res: &ExtractionResult) -> (Formula, Vec<(Name, Formula)>) {
    (
        res.conclusion.clone(),
        res.assumptions
            .iter()
            .map(|(u, (c, _))| (u.clone(), c.clone()))
            .collect(),
    )
}
