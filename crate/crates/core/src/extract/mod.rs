//! Program extraction: definition contexts, positive witnesses and
//! (marked) counterexamples for every proof node.

mod contract;
mod engine;
mod induction;

use std::collections::BTreeMap;

use thiserror::Error;

pub use contract::{
    check_term, checked_contract, checked_contract_marked, contract_marked, contract_oriented,
    contract_plain, contract_plain_reversed, ContractSpec, Orientation,
};
pub use engine::extract;

use crate::interp::{plug, DefContext, Interp};
use crate::kernel::{epsilon_simplify_term, KernelError, Name, Term, Type};
use crate::logic::{Formula, LogicError, Proof};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    QuasiLinear,
    Marked,
}

impl Variant {
    pub fn interp(self) -> Interp {
        match self {
            Variant::QuasiLinear => Interp::Plain,
            Variant::Marked => Interp::Marked,
        }
    }
}

/// Recursion shape for induction whose conclusion has no negative content.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InductionMode {
    NaiveSeparate,
    #[default]
    Simultaneous,
    Flagged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExtractConfig {
    pub variant: Variant,
    pub mode: InductionMode,
    pub orientation: Orientation,
    /// Fail instead of using the general scheme when `mode` cannot apply.
    pub strict_mode: bool,
}

impl ExtractConfig {
    pub fn new(variant: Variant, mode: InductionMode) -> Self {
        ExtractConfig {
            variant,
            mode,
            ..Default::default()
        }
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExtractError {
    #[error("proof does not check: {0}")]
    UncheckedProof(#[from] LogicError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("induction mode needs a conclusion without negative content")]
    SpecialCaseInapplicable,
}

/// Extracted content of a proof `P : A` from assumptions `u_i : C_i`. All
/// terms keep their nulltype parts; [`ExtractionResult::assemble`] erases them.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    pub conclusion: Formula,
    pub config: ExtractConfig,
    /// `E : tau-(A) => hole`
    pub context: DefContext,
    pub dplus: Term,
    pub dminus: BTreeMap<Name, Term>,
    /// The challenge variable `y_A`, bound by the context.
    pub challenge: Name,
    pub challenge_ty: Type,
    /// Open assumptions with their formulas and parameters `x_u`.
    pub assumptions: BTreeMap<Name, (Formula, Term)>,
    /// Induction nodes where the requested mode did not apply.
    pub fallbacks: usize,
    pub proof: Proof,
}

/// Nulltype-free extracted terms.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub full: Term,
    pub plus: Term,
    pub minus: BTreeMap<Name, Term>,
}

impl ExtractionResult {
    /// `[[P]] = E{<d+, d-_1, ..., eps>}` before erasure.
    pub fn full_raw(&self) -> Result<Term, KernelError> {
        let mut bundle = Term::Eps;
        for t in self.dminus.values().rev() {
            bundle = Term::pair(t.clone(), bundle);
        }
        plug(&self.context, &Term::pair(self.dplus.clone(), bundle))
    }

    pub fn plus_raw(&self) -> Result<Term, KernelError> {
        plug(&self.context, &self.dplus)
    }

    pub fn minus_raw(&self, u: &str) -> Option<Result<Term, KernelError>> {
        self.dminus.get(u).map(|t| plug(&self.context, t))
    }

    pub fn assemble(&self) -> Result<Assembled, KernelError> {
        let mut minus = BTreeMap::new();
        for (u, t) in &self.dminus {
            minus.insert(u.clone(), epsilon_simplify_term(&plug(&self.context, t)?)?);
        }
        Ok(Assembled {
            full: epsilon_simplify_term(&self.full_raw()?)?,
            plus: epsilon_simplify_term(&self.plus_raw()?)?,
            minus,
        })
    }

    pub fn size_report(&self) -> Result<SizeReport, KernelError> {
        let full = self.assemble()?.full;
        let proof_size = self.proof.size();
        let msl = self.proof.msl();
        let extracted_size = full.size();
        Ok(SizeReport {
            proof_size,
            msl,
            extracted_size,
            ratio: extracted_size as f64 / (proof_size + msl * msl) as f64,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SizeReport {
    pub proof_size: usize,
    pub msl: usize,
    pub extracted_size: usize,
    pub ratio: f64,
}

/// Name of the challenge parameter of assumption `u`.
pub fn param_name(u: &str) -> Name {
    Name::from(format!("%x_{u}"))
}

#[cfg(test)]
mod tests;
