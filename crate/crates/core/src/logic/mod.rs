//! Many-sorted first-order syntax: signatures, terms, formulas and theories.

mod alpha;
mod formula;
mod signature;
mod sorting;
mod theory;

pub use alpha::{alpha_equal, canonicalize, substitute, substitute_unchecked, SubstitutionError};
pub use formula::{Connective, Formula, NamedFormula, Quantifier, Substitution, Term, Var};
pub use signature::{signature_union, FuncDecl, PredDecl, Signature, SignatureError, Sort};
pub use sorting::{term_sort, well_sorted, Path, SortDiagnostic};
pub use theory::{juxtapose, split_conjunctions, split_formula, Theory, TheoryError};
