//! A first-order workbench for treating axiom systems as answers to
//! why-questions: entailment with checkable proofs, finite countermodels,
//! the nonworse and piecewise-nonworse preorders, pointlessness detection,
//! and an exact-rational Minkowski model for the special relativity case study.

pub mod answers;
pub mod gen;
pub mod logic;
pub mod model;
pub mod parser;
pub mod prover;
pub mod specrel;

pub use logic::{Formula, NamedFormula, Signature, Sort, Term, Theory, Var};
