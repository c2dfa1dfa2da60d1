use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use crate::logic::{term_sort, Signature, Substitution, Term, Var};
use crate::parser::render_term;

use super::clause::{dedup_literals, normalize_owned, normalize_vars, render_literals, tag_vars, Clause, Literal};

/// Variable tags that standardize the two parents of a resolution step apart.
pub const LEFT_TAG: &str = "L";
pub const RIGHT_TAG: &str = "R";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Input {
        label: String,
    },
    /// Parents' variables are tagged `L:` and `R:` before the unifier applies.
    Resolution {
        left: usize,
        left_literal: usize,
        right: usize,
        right_literal: usize,
        unifier: Vec<(Var, Term)>,
    },
    Factoring {
        parent: usize,
        kept: usize,
        removed: usize,
        unifier: Vec<(Var, Term)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub id: usize,
    pub clause: Vec<Literal>,
    pub rule: Rule,
}

/// A resolution refutation. `signature` includes the Skolem and definition
/// symbols introduced by clausification, which the checker needs for sorts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
    pub signature: Signature,
}

pub(crate) fn to_subst(pairs: &[(Var, Term)]) -> Substitution {
    pairs.iter().cloned().collect()
}

/// Conclusion of resolving `left[li]` against `right[ri]` under `s`.
pub(crate) fn resolvent(left: &[Literal], li: usize, right: &[Literal], ri: usize, s: &Substitution) -> Vec<Literal> {
    resolvent_tagged(&tag_vars(left, LEFT_TAG), li, &tag_vars(right, RIGHT_TAG), ri, s)
}

/// As [`resolvent`], for parents already tagged `L:` and `R:`.
pub(crate) fn resolvent_tagged(l: &[Literal], li: usize, r: &[Literal], ri: usize, s: &Substitution) -> Vec<Literal> {
    let lits = l
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != li)
        .map(|(_, x)| x.apply(s))
        .chain(r.iter().enumerate().filter(|(k, _)| *k != ri).map(|(_, x)| x.apply(s)))
        .collect();
    normalize_owned(dedup_literals(lits))
}

pub(crate) fn factor(parent: &[Literal], s: &Substitution) -> Vec<Literal> {
    normalize_owned(dedup_literals(parent.iter().map(|x| x.apply(s)).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("proof has no steps")]
    Empty,
    #[error("last step is not the empty clause")]
    NotARefutation,
    #[error("step {0}: ids must be consecutive from 1")]
    BadId(usize),
    #[error("step {0}: parent does not precede it")]
    ForwardReference(usize),
    #[error("step {0}: input clause not among the inputs")]
    UnknownInput(usize),
    #[error("step {0}: literal index out of range")]
    BadIndex(usize),
    #[error("step {0}: unifier is ill-sorted")]
    IllSortedUnifier(usize),
    #[error("step {0}: unifier does not make the selected literals complementary")]
    NotComplementary(usize),
    #[error("step {0}: unifier does not make the selected literals equal")]
    NotEqual(usize),
    #[error("step {0}: recorded conclusion differs from the recomputed one")]
    WrongConclusion(usize),
}

/// Re-derives every step of `p` from `inputs`. Accepts exactly the proofs
/// whose steps are correct instances of their rules and whose last step
/// is the empty clause.
pub fn check_proof(p: &Proof, inputs: &[Clause]) -> bool {
    verify_proof(p, inputs).is_ok()
}

pub fn verify_proof(p: &Proof, inputs: &[Clause]) -> Result<(), ProofError> {
    let last = p.steps.last().ok_or(ProofError::Empty)?;
    if !last.clause.is_empty() {
        return Err(ProofError::NotARefutation);
    }
    let normalized_inputs: Vec<Vec<Literal>> = inputs.iter().map(|c| normalize_vars(&c.literals)).collect();
    for (k, step) in p.steps.iter().enumerate() {
        let id = step.id;
        if id != k + 1 {
            return Err(ProofError::BadId(id));
        }
        let get = |parent: usize| -> Result<&Vec<Literal>, ProofError> {
            if parent == 0 || parent >= id {
                return Err(ProofError::ForwardReference(id));
            }
            Ok(&p.steps[parent - 1].clause)
        };
        let expected = match &step.rule {
            Rule::Input { .. } => {
                let c = normalize_vars(&step.clause);
                if !normalized_inputs.contains(&c) {
                    return Err(ProofError::UnknownInput(id));
                }
                continue;
            }
            Rule::Resolution { left, left_literal, right, right_literal, unifier } => {
                let (l, r) = (get(*left)?, get(*right)?);
                if *left_literal >= l.len() || *right_literal >= r.len() {
                    return Err(ProofError::BadIndex(id));
                }
                check_sorts(&p.signature, unifier).map_err(|_| ProofError::IllSortedUnifier(id))?;
                let s = to_subst(unifier);
                let a = tag_vars(l, LEFT_TAG)[*left_literal].apply(&s);
                let b = tag_vars(r, RIGHT_TAG)[*right_literal].apply(&s);
                if !a.complements(&b) {
                    return Err(ProofError::NotComplementary(id));
                }
                resolvent(l, *left_literal, r, *right_literal, &s)
            }
            Rule::Factoring { parent, kept, removed, unifier } => {
                let c = get(*parent)?;
                if *kept >= c.len() || *removed >= c.len() || kept == removed {
                    return Err(ProofError::BadIndex(id));
                }
                check_sorts(&p.signature, unifier).map_err(|_| ProofError::IllSortedUnifier(id))?;
                let s = to_subst(unifier);
                if c[*kept].apply(&s) != c[*removed].apply(&s) {
                    return Err(ProofError::NotEqual(id));
                }
                factor(c, &s)
            }
        };
        if normalize_vars(&step.clause) != expected {
            return Err(ProofError::WrongConclusion(id));
        }
    }
    Ok(())
}

fn check_sorts(sig: &Signature, unifier: &[(Var, Term)]) -> Result<(), ()> {
    for (v, t) in unifier {
        match term_sort(sig, t) {
            Ok(s) if s == v.sort => {}
            _ => return Err(()),
        }
    }
    Ok(())
}

fn render_unifier(u: &[(Var, Term)]) -> String {
    let parts: Vec<String> = u.iter().map(|(v, t)| format!("{} := {}", v.name, render_term(t))).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Proof {
    /// One line per step: `step N: <clause> [rule parents unifier]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let mut line = format!("step {}: {} [", step.id, render_literals(&step.clause));
            match &step.rule {
                Rule::Input { label } => {
                    let _ = write!(line, "input {label}");
                }
                Rule::Resolution { left, left_literal, right, right_literal, unifier } => {
                    let _ = write!(line, "resolution {left}.{left_literal} {right}.{right_literal} {}", render_unifier(unifier));
                }
                Rule::Factoring { parent, kept, removed, unifier } => {
                    let _ = write!(line, "factoring {parent}.{kept}.{removed} {}", render_unifier(unifier));
                }
            }
            line.push(']');
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
