use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::value::{Ground, Mark, Table, Value};
use crate::kernel::{Name, Type};

/// Largest instance space enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000;

/// Finite interpretation of the object language: nat is cut off at
/// `nat_bound`, function spaces are enumerated or sampled.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    /// Nat values range over `0..=nat_bound`.
    pub nat_bound: u64,
    /// Tables drawn when a function space is too large to enumerate.
    pub sample_budget: usize,
    pub seed: u64,
    /// Fixed values for free object variables.
    pub bindings: BTreeMap<Name, Value>,
    /// Carrier of each type variable; nat when absent.
    pub carriers: BTreeMap<Name, Type>,
}

impl Default for FiniteModel {
    fn default() -> Self {
        FiniteModel {
            nat_bound: 3,
            sample_budget: 50,
            seed: 0,
            bindings: BTreeMap::new(),
            carriers: BTreeMap::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot read model: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported value in model for `{0}`")]
    BadValue(String),
}

/// On-disk model description.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSpec {
    pub nat_bound: Option<u64>,
    pub sample_budget: Option<usize>,
    pub seed: Option<u64>,
    /// Nat-indexed tables, constant beyond the last entry.
    pub functions: BTreeMap<String, Vec<serde_json::Value>>,
    pub values: BTreeMap<String, serde_json::Value>,
    /// Values for the default parameters of type variables, by variable.
    pub defaults: BTreeMap<String, serde_json::Value>,
}

fn json_ground(name: &str, v: &serde_json::Value) -> Result<Ground, ModelError> {
    use serde_json::Value as J;
    Ok(match v {
        J::Bool(b) => Ground::Bool(*b),
        J::Number(n) => Ground::Nat(
            n.as_u64()
                .ok_or_else(|| ModelError::BadValue(name.into()))?,
        ),
        J::String(s) => Ground::Mark(match s.as_str() {
            "tt" | "mtt" => Mark::Tt,
            "ff" | "mff" => Mark::Ff,
            "bot" | "mbot" => Mark::Bot,
            _ => return Err(ModelError::BadValue(name.into())),
        }),
        J::Array(items) if items.len() == 2 => {
            Ground::pair(json_ground(name, &items[0])?, json_ground(name, &items[1])?)
        }
        J::Null => Ground::Eps,
        _ => return Err(ModelError::BadValue(name.into())),
    })
}

impl FiniteModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self, ModelError> {
        let mut m = FiniteModel::default();
        if let Some(b) = spec.nat_bound {
            m.nat_bound = b;
        }
        if let Some(n) = spec.sample_budget {
            m.sample_budget = n;
        }
        if let Some(s) = spec.seed {
            m.seed = s;
        }
        for (f, table) in &spec.functions {
            let vals = table
                .iter()
                .map(|v| json_ground(f, v).map(|g| g.to_value()))
                .collect::<Result<Vec<_>, _>>()?;
            m.bindings
                .insert(Name::from(f.as_str()), Value::table(Table::nat_list(vals)));
        }
        for (x, v) in &spec.values {
            m.bindings
                .insert(Name::from(x.as_str()), json_ground(x, v)?.to_value());
        }
        for (a, v) in &spec.defaults {
            let name = crate::kernel::default_var_name(a);
            m.bindings
                .insert(Name::from(name), json_ground(a, v)?.to_value());
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)?;
        let spec: ModelSpec = serde_json::from_str(&text)?;
        Self::from_spec(&spec)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn carrier(&self, ty: &Type) -> Type {
        match ty {
            Type::Var(a) => self.carriers.get(a).cloned().unwrap_or(Type::Nat),
            other => other.clone(),
        }
    }

    /// Size of the value space of `ty`, if small enough to matter.
    pub fn count(&self, ty: &Type) -> Option<u128> {
        match &self.carrier(ty) {
            Type::Bool => Some(2),
            Type::Mark => Some(3),
            Type::Nat => Some(self.nat_bound as u128 + 1),
            Type::Epsilon | Type::Hole => Some(1),
            Type::Prod(a, b) => self.count(a)?.checked_mul(self.count(b)?),
            Type::Arrow(a, b) => {
                if !is_first_order(a) {
                    return None;
                }
                let (n, m) = (self.count(a)?, self.count(b)?);
                let e = u32::try_from(n).ok()?;
                m.checked_pow(e)
                    .filter(|c| *c <= EXHAUSTIVE_LIMIT * EXHAUSTIVE_LIMIT)
            }
            Type::Var(_) => unreachable!(),
        }
    }

    pub fn is_exhaustive(&self, ty: &Type) -> bool {
        self.count(ty).is_some_and(|c| c <= EXHAUSTIVE_LIMIT)
    }

    /// All first-order values of `ty`.
    pub fn ground_values(&self, ty: &Type) -> Vec<Ground> {
        match &self.carrier(ty) {
            Type::Bool => vec![Ground::Bool(false), Ground::Bool(true)],
            Type::Mark => vec![
                Ground::Mark(Mark::Tt),
                Ground::Mark(Mark::Ff),
                Ground::Mark(Mark::Bot),
            ],
            Type::Nat => (0..=self.nat_bound).map(Ground::Nat).collect(),
            Type::Epsilon | Type::Hole => vec![Ground::Eps],
            Type::Prod(a, b) => {
                let bs = self.ground_values(b);
                self.ground_values(a)
                    .into_iter()
                    .flat_map(|x| bs.iter().map(move |y| Ground::pair(x.clone(), y.clone())))
                    .collect()
            }
            Type::Arrow(..) => panic!("no first-order values of function type"),
            Type::Var(_) => unreachable!(),
        }
    }

    /// Values of `ty`: every value when there are at most
    /// [`EXHAUSTIVE_LIMIT`], otherwise `sample_budget` seeded samples.
    pub fn enumerate_values(&self, ty: &Type) -> Vec<Value> {
        if self.is_exhaustive(ty) {
            self.all_values(ty)
        } else {
            let mut rng = self.rng();
            (0..self.sample_budget)
                .map(|_| self.random_value(ty, &mut rng))
                .collect()
        }
    }

    fn all_values(&self, ty: &Type) -> Vec<Value> {
        match &self.carrier(ty) {
            Type::Prod(a, b) => {
                let bs = self.all_values(b);
                self.all_values(a)
                    .into_iter()
                    .flat_map(|x| bs.iter().map(move |y| Value::pair(x.clone(), y.clone())))
                    .collect()
            }
            Type::Arrow(a, b) => {
                let keys = self.ground_values(a);
                let outs = self.all_values(b);
                let mut tables: Vec<Vec<Value>> = vec![Vec::new()];
                for _ in &keys {
                    tables = tables
                        .into_iter()
                        .flat_map(|t| {
                            outs.iter().map(move |o| {
                                let mut t = t.clone();
                                t.push(o.clone());
                                t
                            })
                        })
                        .collect();
                }
                tables
                    .into_iter()
                    .map(|vals| {
                        let default = vals.last().cloned().unwrap_or(Value::Eps);
                        Value::table(Table::Ground {
                            entries: keys.iter().cloned().zip(vals).collect(),
                            default: Box::new(default),
                        })
                    })
                    .collect()
            }
            other => self
                .ground_values(other)
                .iter()
                .map(Ground::to_value)
                .collect(),
        }
    }

    pub fn random_value(&self, ty: &Type, rng: &mut ChaCha8Rng) -> Value {
        match &self.carrier(ty) {
            Type::Prod(a, b) => {
                let x = self.random_value(a, rng);
                Value::pair(x, self.random_value(b, rng))
            }
            Type::Arrow(a, b) if is_first_order(a) => {
                let keys = self.ground_values(a);
                let entries: Vec<(Ground, Value)> = keys
                    .into_iter()
                    .map(|k| (k, self.random_value(b, rng)))
                    .collect();
                let default = entries.last().map(|(_, v)| v.clone()).unwrap_or(Value::Eps);
                Value::table(Table::Ground {
                    entries,
                    default: Box::new(default),
                })
            }
            Type::Arrow(a, b) => match &self.carrier(a) {
                Type::Arrow(arg, res) => {
                    let at = self.random_value(arg, rng);
                    let then = self.random_value(&Type::arrow((**res).clone(), (**b).clone()), rng);
                    Value::table(Table::Probe {
                        at: Box::new(at),
                        then: Box::new(then),
                    })
                }
                Type::Prod(l, r) => {
                    let right = rng.gen_bool(0.5);
                    let side = if right { r } else { l };
                    let then =
                        self.random_value(&Type::arrow((**side).clone(), (**b).clone()), rng);
                    Value::table(Table::Project {
                        right,
                        then: Box::new(then),
                    })
                }
                _ => unreachable!("first-order domains are tabulated"),
            },
            other => self
                .ground_values(other)
                .choose(rng)
                .expect("nonempty")
                .to_value(),
        }
    }

    /// Assignments to the given variables: the full product when it has at
    /// most [`EXHAUSTIVE_LIMIT`] elements, otherwise `samples` seeded draws.
    pub fn instances(&self, vars: &[(Name, Type)], samples: usize) -> (Vec<Vec<Value>>, bool) {
        let total = vars
            .iter()
            .try_fold(1u128, |acc, (_, ty)| acc.checked_mul(self.count(ty)?));
        match total {
            Some(n) if n <= EXHAUSTIVE_LIMIT => {
                let mut out: Vec<Vec<Value>> = vec![Vec::new()];
                for (_, ty) in vars {
                    let vals = self.all_values(ty);
                    out = out
                        .into_iter()
                        .flat_map(|row| {
                            vals.iter().map(move |v| {
                                let mut row = row.clone();
                                row.push(v.clone());
                                row
                            })
                        })
                        .collect();
                }
                (out, true)
            }
            _ => {
                let mut rng = self.rng();
                let rows = (0..samples)
                    .map(|_| {
                        vars.iter()
                            .map(|(_, ty)| self.random_value(ty, &mut rng))
                            .collect()
                    })
                    .collect();
                (rows, false)
            }
        }
    }

    pub fn random_nat(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..=self.nat_bound)
    }
}

pub fn is_first_order(ty: &Type) -> bool {
    match ty {
        Type::Arrow(..) => false,
        Type::Prod(a, b) => is_first_order(a) && is_first_order(b),
        _ => true,
    }
}
