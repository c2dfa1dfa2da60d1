//! Budgeted refutation prover for many-sorted first-order logic.
//!
//! Entailment `th |= goal` is attempted by clausifying `th` together with
//! `~goal` and saturating under binary resolution and factoring. Equality
//! is axiomatized. A successful run yields a [`Proof`] that is re-checked
//! by [`check_proof`] before it is reported; running out of budget is an
//! ordinary `Unknown` outcome.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::logic::{Formula, NamedFormula, Signature, Theory};

mod clause;
mod clausify;
mod proof;
mod saturate;
mod unify;

pub use clause::{normalize_vars, render_literals, Clause, Literal, Origin, EQUALS};
pub use clausify::{clausify, clausify_all, equality_axioms, ClauseSet, ClausifyOptions};
pub use proof::{check_proof, verify_proof, Proof, ProofError, ProofStep, Rule};
pub use unify::{unify, unify_args};

/// Resource limits shared by the prover and the model finder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Prover: clauses generated. Model finder: ground clauses.
    pub max_clauses: usize,
    /// Prover: given-clause selections. Model finder: decisions.
    pub max_derivation_steps: usize,
    pub wall_time: Duration,
}

impl UnknownReason {
    /// True for reasons that indicate a bug rather than a resource limit.
    pub fn is_internal(&self) -> bool {
        matches!(self, UnknownReason::ProofRejected(_) | UnknownReason::ModelRejected(_))
    }
}

impl Budget {
    pub const DEFAULT_CLAUSES: usize = 20_000;
    pub const DEFAULT_STEPS: usize = 2_000;
    pub const DEFAULT_WALL_SECS: u64 = 5;

    pub fn new(max_clauses: usize, max_derivation_steps: usize, wall_time: Duration) -> Self {
        Budget { max_clauses: max_clauses.max(1), max_derivation_steps: max_derivation_steps.max(1), wall_time }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_CLAUSES, Self::DEFAULT_STEPS, Duration::from_secs(Self::DEFAULT_WALL_SECS))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnknownReason {
    /// No further inferences; with a complete calculus this means no proof exists.
    Saturated,
    ClauseLimit,
    StepLimit,
    Timeout,
    /// A refutation was found but failed re-checking; reported, never trusted.
    ProofRejected(String),
    /// Every domain assignment up to the size bound was ruled out.
    SizeBound,
    /// A finite model failed re-evaluation; reported, never trusted.
    ModelRejected(String),
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Saturated => f.write_str("search space saturated without refutation"),
            UnknownReason::ClauseLimit => f.write_str("clause limit reached"),
            UnknownReason::StepLimit => f.write_str("step limit reached"),
            UnknownReason::Timeout => f.write_str("wall-time limit reached"),
            UnknownReason::ProofRejected(why) => write!(f, "internal error: proof rejected by checker ({why})"),
            UnknownReason::SizeBound => f.write_str("no finite model within the size bound"),
            UnknownReason::ModelRejected(why) => write!(f, "internal error: model rejected by evaluator ({why})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub given: usize,
    pub generated: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(Proof),
    Unknown(UnknownReason),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Input clauses the proof refers to.
    pub inputs: Vec<Clause>,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self.outcome, Outcome::Proved(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match &self.outcome {
            Outcome::Proved(p) => Some(p),
            Outcome::Unknown(_) => None,
        }
    }
}

/// Label of the negated goal among the clausified inputs.
pub const NEGATED_GOAL: &str = "negated_goal";

/// Attempts to prove `th |= goal` within `budget`.
pub fn entails(th: &Theory, goal: &Formula, budget: &Budget) -> Verdict {
    let mut inputs = th.axioms().to_vec();
    inputs.push(NamedFormula::new(NEGATED_GOAL, Formula::not(goal.clone())));
    refute(th.signature(), &inputs, budget)
}

/// Attempts to refute the conjunction of `inputs`.
pub fn refute(sig: &Signature, inputs: &[NamedFormula], budget: &Budget) -> Verdict {
    let start = Instant::now();
    let cs = clausify_all(sig, inputs, ClausifyOptions::default());
    let mut stats = Stats::default();
    let outcome = match saturate::saturate(&cs.clauses, &cs.signature, budget, &mut stats) {
        saturate::Saturation::Refuted(proof) => match verify_proof(&proof, &cs.clauses) {
            Ok(()) => Outcome::Proved(proof),
            Err(e) => Outcome::Unknown(UnknownReason::ProofRejected(e.to_string())),
        },
        saturate::Saturation::Open(reason) => Outcome::Unknown(reason),
    };
    stats.elapsed = start.elapsed();
    Verdict { outcome, inputs: cs.clauses, stats }
}

#[cfg(test)]
mod tests;
