//! Theories as answers to "Why P?".
//!
//! A theory is a *possible* answer when it is consistent and does not have
//! P among its axioms, and an *acceptable* one when it also entails P.
//! Answers are compared by two preorders: `t2` is nonworse than `t1` when
//! every axiom of `t2` follows from `t1`, and piecewise nonworse when each
//! axiom of `t2` follows from a single axiom of `t1`. Entailment is only
//! semi-decidable, so every verdict is three-valued and a Yes or No always
//! comes with a proof, a finite structure or a membership witness.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{signature_union, well_sorted, Formula, Signature, Theory, TheoryError};
use crate::model::DomainAssignment;
use crate::prover::Budget;

mod registry;
mod relations;
mod report;
mod verdict;

pub use registry::{Registry, RegistryError, Source, CACHE_DIR};
pub use relations::{
    better, equivalent, is_acceptable, is_pointless, is_possible, nonworse, piecewise_nonworse, CandidateOutcome,
    Piecewise, Pointless, Witness, WitnessKind,
};
pub use report::{compare, compare_theories, Comparison, ComparisonReport, EvidenceRef, VerdictReport, SCHEMA};
pub use verdict::{Evidence, ThreeValued, Truth};

/// "Why P?" for a closed statement P over `signature`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhyQuestion {
    pub statement: Formula,
    pub signature: Signature,
}

impl WhyQuestion {
    pub fn new(statement: Formula, signature: Signature) -> Result<Self, AnswerError> {
        let diags = well_sorted(&signature, &statement);
        if !diags.is_empty() {
            let detail = diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return Err(AnswerError::IllSortedQuestion(detail));
        }
        if !statement.is_closed() {
            return Err(AnswerError::IllSortedQuestion("the statement has free variables".into()));
        }
        Ok(WhyQuestion { statement, signature })
    }
}

/// Which preorder a comparison uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Nonworse,
    Piecewise,
}

/// Resources for one query: the prover and model-finder budget plus the
/// largest domain size tried per sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub budget: Budget,
    pub max_domain: usize,
}

impl Limits {
    pub const DEFAULT_MAX_DOMAIN: usize = 3;

    pub fn new(budget: Budget, max_domain: usize) -> Self {
        Limits { budget, max_domain: max_domain.max(1) }
    }

    /// A budget that allows almost nothing, for forcing Unknown.
    pub fn starved() -> Self {
        Limits::new(Budget::new(1, 1, Duration::from_secs(5)), 1)
    }

    pub(crate) fn domains(&self, sig: &Signature) -> DomainAssignment {
        DomainAssignment::uniform(sig, self.max_domain)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::new(Budget::default(), Self::DEFAULT_MAX_DOMAIN)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnswerError {
    #[error("question is not well-sorted: {0}")]
    IllSortedQuestion(String),
    #[error("signatures cannot be combined: {0}")]
    SignatureConflict(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// Both theories over the union of their signatures. The flag is set when
/// either one had to be extended.
pub(crate) fn lift_pair(a: &Theory, b: &Theory) -> Result<(Theory, Theory, bool), AnswerError> {
    let sig = signature_union(a.signature(), b.signature()).map_err(|e| AnswerError::SignatureConflict(e.to_string()))?;
    let lifted = *a.signature() != sig || *b.signature() != sig;
    let lift = |t: &Theory| t.lift(&sig).map_err(|e: TheoryError| AnswerError::SignatureConflict(e.to_string()));
    Ok((lift(a)?, lift(b)?, lifted))
}

/// `th` over a signature that also covers the question.
pub(crate) fn lift_for(th: &Theory, q: &WhyQuestion) -> Result<Theory, AnswerError> {
    let sig = signature_union(th.signature(), &q.signature).map_err(|e| AnswerError::SignatureConflict(e.to_string()))?;
    th.lift(&sig).map_err(|e| AnswerError::SignatureConflict(e.to_string()))
}
