use std::collections::BTreeSet;

use thiserror::Error;

use super::alpha::canonicalize;
use super::formula::{Connective, Formula, NamedFormula, Quantifier, Var};
use super::signature::{signature_union, Signature, SignatureError};
use super::sorting::well_sorted;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("theory name must not be empty")]
    EmptyName,
    #[error("axiom label must not be empty")]
    EmptyLabel,
    #[error("axiom label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("axiom `{label}` is a renaming of axiom `{earlier}`")]
    AlphaDuplicate { label: String, earlier: String },
    #[error("axiom `{label}` is not well-sorted: {detail}")]
    IllSorted { label: String, detail: String },
    #[error("axiom `{label}` has free variables: {vars}")]
    FreeVariables { label: String, vars: String },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("signature of `{0}` is not contained in the target signature")]
    NotASubsignature(String),
}

/// A named, finite, ordered axiom list over a signature.
///
/// Theories are not closed under consequence. Order is kept for stable
/// labels and reports; every logical operation treats the axioms as a set
/// modulo alpha-equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    name: String,
    signature: Signature,
    axioms: Vec<NamedFormula>,
    canonical: Vec<Formula>,
}

impl Theory {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        axioms: Vec<NamedFormula>,
    ) -> Result<Theory, TheoryError> {
        let name = name.into();
        if name.is_empty() {
            return Err(TheoryError::EmptyName);
        }
        let mut labels = BTreeSet::new();
        let mut canonical: Vec<Formula> = Vec::with_capacity(axioms.len());
        for ax in &axioms {
            if ax.label.is_empty() {
                return Err(TheoryError::EmptyLabel);
            }
            if !labels.insert(ax.label.clone()) {
                return Err(TheoryError::DuplicateLabel(ax.label.clone()));
            }
            let diags = well_sorted(&signature, &ax.formula);
            if !diags.is_empty() {
                return Err(TheoryError::IllSorted {
                    label: ax.label.clone(),
                    detail: diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                });
            }
            let free = ax.formula.free_vars();
            if !free.is_empty() {
                return Err(TheoryError::FreeVariables {
                    label: ax.label.clone(),
                    vars: free.iter().map(|v| &*v.name).collect::<Vec<_>>().join(", "),
                });
            }
            let c = canonicalize(&ax.formula);
            if let Some(i) = canonical.iter().position(|d| *d == c) {
                return Err(TheoryError::AlphaDuplicate {
                    label: ax.label.clone(),
                    earlier: axioms[i].label.clone(),
                });
            }
            canonical.push(c);
        }
        Ok(Theory { name, signature, axioms, canonical })
    }

    pub fn empty(name: impl Into<String>, signature: Signature) -> Result<Theory, TheoryError> {
        Theory::new(name, signature, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn axioms(&self) -> &[NamedFormula] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn axiom(&self, label: &str) -> Option<&NamedFormula> {
        self.axioms.iter().find(|a| a.label == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.axioms.iter().map(|a| a.label.as_str())
    }

    /// The axiom alpha-equal to `f`, if any.
    pub fn find_alpha(&self, f: &Formula) -> Option<&NamedFormula> {
        let c = canonicalize(f);
        self.canonical.iter().position(|d| *d == c).map(|i| &self.axioms[i])
    }

    pub fn contains_alpha(&self, f: &Formula) -> bool {
        self.find_alpha(f).is_some()
    }

    /// Every axiom of `self` occurs in `other` up to alpha-equivalence.
    pub fn is_alpha_subset_of(&self, other: &Theory) -> bool {
        self.canonical.iter().all(|c| other.canonical.contains(c))
    }

    pub fn renamed(&self, name: impl Into<String>) -> Result<Theory, TheoryError> {
        Theory::new(name, self.signature.clone(), self.axioms.clone())
    }

    /// The same axioms over a larger signature.
    pub fn lift(&self, signature: &Signature) -> Result<Theory, TheoryError> {
        if !self.signature.is_subsignature_of(signature) {
            return Err(TheoryError::NotASubsignature(self.name.clone()));
        }
        Ok(Theory {
            name: self.name.clone(),
            signature: signature.clone(),
            axioms: self.axioms.clone(),
            canonical: self.canonical.clone(),
        })
    }

    /// Adds an axiom, keeping the theory invariants.
    pub fn with_axiom(&self, axiom: NamedFormula) -> Result<Theory, TheoryError> {
        let mut axioms = self.axioms.clone();
        axioms.push(axiom);
        Theory::new(self.name.clone(), self.signature.clone(), axioms)
    }

    /// The theory without the axiom carrying `label`.
    pub fn without(&self, label: &str) -> Theory {
        let keep: Vec<usize> = (0..self.axioms.len()).filter(|&i| self.axioms[i].label != label).collect();
        Theory {
            name: self.name.clone(),
            signature: self.signature.clone(),
            axioms: keep.iter().map(|&i| self.axioms[i].clone()).collect(),
            canonical: keep.iter().map(|&i| self.canonical[i].clone()).collect(),
        }
    }
}

fn strip_foralls(f: &Formula) -> (Vec<Var>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Quant(Quantifier::Forall, v, body) = cur {
        vars.push(v.clone());
        cur = body;
    }
    (vars, cur)
}

fn rewrap(vars: &[Var], body: &Formula) -> Formula {
    let free = body.free_vars();
    let kept: Vec<Var> = vars
        .iter()
        .enumerate()
        .filter(|(i, v)| free.contains(v) && !vars[i + 1..].contains(v))
        .map(|(_, v)| v.clone())
        .collect();
    Formula::forall_many(kept, body.clone())
}

/// Splits a formula at top-level conjunctions, distributing one leading
/// block of universal quantifiers over the conjuncts.
pub fn split_formula(f: &Formula) -> Vec<Formula> {
    let (vars, body) = strip_foralls(f);
    match body {
        Formula::Binary(Connective::And, a, b) => {
            let mut out = split_formula(&rewrap(&vars, a));
            out.extend(split_formula(&rewrap(&vars, b)));
            out
        }
        _ => vec![f.clone()],
    }
}

fn fresh_label(base: String, taken: &BTreeSet<String>) -> String {
    if !taken.contains(&base) {
        return base;
    }
    (2..).map(|k| format!("{base}_{k}")).find(|l| !taken.contains(l)).expect("unbounded")
}

/// Replaces every conjunctive axiom by its conjuncts.
///
/// A split axiom `L` yields labels `L_1, L_2, ...`; alpha-duplicates among
/// the results are merged, keeping the first occurrence.
pub fn split_conjunctions(th: &Theory) -> Theory {
    let mut taken: BTreeSet<String> = th.labels().map(String::from).collect();
    let mut out: Vec<NamedFormula> = Vec::new();
    let mut seen: Vec<Formula> = Vec::new();
    for ax in th.axioms() {
        let pieces = split_formula(&ax.formula);
        let single = pieces.len() == 1;
        for (i, piece) in pieces.into_iter().enumerate() {
            let c = canonicalize(&piece);
            if seen.contains(&c) {
                continue;
            }
            seen.push(c);
            let label = if single {
                ax.label.clone()
            } else {
                let l = fresh_label(format!("{}_{}", ax.label, i + 1), &taken);
                taken.insert(l.clone());
                l
            };
            out.push(NamedFormula::new(label, piece));
        }
    }
    Theory::new(format!("{}_split", th.name()), th.signature().clone(), out)
        .expect("splitting preserves sorting, closedness and label uniqueness")
}

/// Union of two theories over the union of their signatures.
///
/// Labels are prefixed with the source theory name; axioms alpha-equal to
/// an earlier one are dropped.
pub fn juxtapose(t1: &Theory, t2: &Theory) -> Result<Theory, TheoryError> {
    let signature = signature_union(t1.signature(), t2.signature())?;
    let mut taken = BTreeSet::new();
    let mut seen: Vec<Formula> = Vec::new();
    let mut axioms = Vec::new();
    for th in [t1, t2] {
        for (ax, c) in th.axioms.iter().zip(&th.canonical) {
            if seen.contains(c) {
                continue;
            }
            seen.push(c.clone());
            let label = fresh_label(format!("{}_{}", th.name(), ax.label), &taken);
            taken.insert(label.clone());
            axioms.push(NamedFormula::new(label, ax.formula.clone()));
        }
    }
    Theory::new(format!("{}_{}", t1.name(), t2.name()), signature, axioms)
}
