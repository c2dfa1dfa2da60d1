//! Finite model search and evaluation.
//!
//! Axioms are clausified, flattened so that every atom mentions only
//! variables, grounded over the chosen domain sizes and handed to a DPLL
//! solver. Every interpretation reported is re-evaluated against the
//! original formulas first.

use std::time::Instant;

use crate::logic::{Formula, NamedFormula, Signature, Theory};
use crate::prover::{clausify_all, Budget, ClausifyOptions, UnknownReason, NEGATED_GOAL};

mod eval;
mod ground;
mod interp;
mod sat;

pub use eval::{eval_term, evaluate, holds, Env, EvalError, Structure};
pub use interp::{DomainAssignment, FiniteInterpretation, InterpError};
pub use sat::{SatResult, Solver};

/// Solver decisions allowed per unit of `Budget::max_derivation_steps`.
pub const DECISIONS_PER_STEP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ModelOutcome {
    Found(FiniteInterpretation),
    /// Exhaustively ruled out at the sizes searched.
    NotFound,
    Unknown(UnknownReason),
}

impl ModelOutcome {
    pub fn model(&self) -> Option<&FiniteInterpretation> {
        match self {
            ModelOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// A model of `th` with exactly the domain sizes `d`.
pub fn find_model(th: &Theory, d: &DomainAssignment, budget: &Budget) -> ModelOutcome {
    let deadline = Instant::now() + budget.wall_time;
    search_at(th.signature(), th.axioms(), &[], d, budget, deadline)
}

/// A model of `th` at the smallest sizes up to `max`, in order of total
/// size and then lexicographically. `NotFound` covers every size tried.
pub fn find_model_upto(th: &Theory, max: &DomainAssignment, budget: &Budget) -> ModelOutcome {
    search_upto(th.signature(), th.axioms(), &[], max, budget)
}

/// A model of `th` in which `goal` is false. Returns `Unknown` when none
/// exists up to `max`: finite search cannot show entailment.
pub fn countermodel(th: &Theory, goal: &Formula, max: &DomainAssignment, budget: &Budget) -> ModelOutcome {
    let negated = NamedFormula::new(NEGATED_GOAL, Formula::not(goal.clone()));
    match search_upto(th.signature(), th.axioms(), std::slice::from_ref(&negated), max, budget) {
        ModelOutcome::NotFound => ModelOutcome::Unknown(UnknownReason::SizeBound),
        other => other,
    }
}

fn search_upto(
    sig: &Signature,
    axioms: &[NamedFormula],
    extra: &[NamedFormula],
    max: &DomainAssignment,
    budget: &Budget,
) -> ModelOutcome {
    let deadline = Instant::now() + budget.wall_time;
    let mut gave_up = None;
    for d in max.up_to() {
        match search_at(sig, axioms, extra, &d, budget, deadline) {
            ModelOutcome::NotFound => {}
            ModelOutcome::Unknown(UnknownReason::Timeout) => return ModelOutcome::Unknown(UnknownReason::Timeout),
            ModelOutcome::Unknown(r) if r.is_internal() => return ModelOutcome::Unknown(r),
            ModelOutcome::Unknown(r) => {
                gave_up.get_or_insert(r);
            }
            found => return found,
        }
    }
    match gave_up {
        Some(r) => ModelOutcome::Unknown(r),
        None => ModelOutcome::NotFound,
    }
}

fn search_at(
    sig: &Signature,
    axioms: &[NamedFormula],
    extra: &[NamedFormula],
    d: &DomainAssignment,
    budget: &Budget,
    deadline: Instant,
) -> ModelOutcome {
    if Instant::now() >= deadline {
        return ModelOutcome::Unknown(UnknownReason::Timeout);
    }
    let inputs: Vec<NamedFormula> = axioms.iter().chain(extra).cloned().collect();
    let opts = ClausifyOptions { equality_axioms: false, ..ClausifyOptions::default() };
    let cs = clausify_all(sig, &inputs, opts);
    let (mut solver, layout) = match ground::ground(&cs.signature, &cs.clauses, d, budget.max_clauses) {
        ground::Grounding::Ready(s, l) => (s, l),
        ground::Grounding::TooLarge => return ModelOutcome::Unknown(UnknownReason::ClauseLimit),
    };
    let decisions = budget.max_derivation_steps.saturating_mul(DECISIONS_PER_STEP);
    match solver.solve(decisions, Some(deadline)) {
        SatResult::Sat(values) => {
            let full = ground::decode(&cs.signature, d, &layout, &values);
            let m = full.restrict(sig);
            match validate(&m, axioms, extra) {
                Ok(()) => ModelOutcome::Found(m),
                Err(why) => ModelOutcome::Unknown(UnknownReason::ModelRejected(why)),
            }
        }
        SatResult::Unsat => ModelOutcome::NotFound,
        SatResult::DecisionLimit => ModelOutcome::Unknown(UnknownReason::StepLimit),
        SatResult::Timeout => ModelOutcome::Unknown(UnknownReason::Timeout),
    }
}

fn validate(m: &FiniteInterpretation, axioms: &[NamedFormula], extra: &[NamedFormula]) -> Result<(), String> {
    for a in axioms.iter().chain(extra) {
        match holds(m, &a.formula) {
            Ok(true) => {}
            Ok(false) => return Err(format!("`{}` is false", a.label)),
            Err(e) => return Err(format!("`{}`: {e}", a.label)),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
