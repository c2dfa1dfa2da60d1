use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::{alpha_equal, Formula, NamedFormula, Signature};
use crate::model::{holds, FiniteInterpretation};
use crate::parser::render;
use crate::prover::{check_proof, clausify_all, ClausifyOptions, Proof, UnknownReason, NEGATED_GOAL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Yes => "yes",
            Truth::No => "no",
            Truth::Unknown => "unknown",
        })
    }
}

/// Why a verdict came out the way it did.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// A refutation of `premises` together with the negated `goal`, or of
    /// `premises` alone when there is no goal.
    Proof {
        signature: Signature,
        premises: Vec<NamedFormula>,
        goal: Option<NamedFormula>,
        proof: Proof,
    },
    /// A finite structure satisfying `premises` in which `goal` is false.
    Countermodel { premises: Vec<NamedFormula>, goal: NamedFormula, model: FiniteInterpretation },
    /// A finite model of `axioms`.
    Model { axioms: Vec<NamedFormula>, model: FiniteInterpretation },
    /// `formula` is axiom `axiom` up to renaming of bound variables.
    Membership { formula: Formula, axiom: NamedFormula },
    /// `formula` is none of `axioms` up to renaming of bound variables.
    NonMembership { formula: Formula, theory: String, axioms: Vec<NamedFormula> },
    /// A statement about every axiom of `theory`, which has none.
    Vacuous { theory: String },
    /// A query that ran out of resources.
    Exhausted { query: String, reason: UnknownReason },
    Note(String),
}

fn labels(fs: &[NamedFormula]) -> String {
    let names: Vec<&str> = fs.iter().map(|f| f.label.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Proof { goal: Some(_), .. } => "proof",
            Evidence::Proof { goal: None, .. } => "refutation",
            Evidence::Countermodel { .. } => "countermodel",
            Evidence::Model { .. } => "model",
            Evidence::Membership { .. } => "membership",
            Evidence::NonMembership { .. } => "non-membership",
            Evidence::Vacuous { .. } => "vacuous",
            Evidence::Exhausted { .. } => "budget",
            Evidence::Note(_) => "note",
        }
    }

    /// One-line description of what the evidence shows.
    pub fn subject(&self) -> String {
        match self {
            Evidence::Proof { premises, goal: Some(g), .. } => format!("{} |= {}", labels(premises), g.label),
            Evidence::Proof { premises, goal: None, .. } => format!("{} is inconsistent", labels(premises)),
            Evidence::Countermodel { premises, goal, .. } => format!("{} |/= {}", labels(premises), goal.label),
            Evidence::Model { axioms, .. } => format!("{} is satisfiable", labels(axioms)),
            Evidence::Membership { axiom, .. } => format!("axiom {}", axiom.label),
            Evidence::NonMembership { formula, theory, .. } => format!("{} is not an axiom of {theory}", render(formula)),
            Evidence::Vacuous { theory } => format!("{theory} has no axioms"),
            Evidence::Exhausted { query, reason } => format!("{query}: {reason}"),
            Evidence::Note(text) => text.clone(),
        }
    }

    /// True for proofs and finite structures, which are worth a file.
    pub fn has_artifact(&self) -> bool {
        matches!(self, Evidence::Proof { .. } | Evidence::Countermodel { .. } | Evidence::Model { .. })
    }

    /// Plain-text rendering of the artifact, if any.
    pub fn artifact(&self) -> Option<String> {
        let header = |out: &mut String, premises: &[NamedFormula], goal: Option<&NamedFormula>| {
            for p in premises {
                out.push_str(&format!("# premise {}: {}\n", p.label, render(&p.formula)));
            }
            if let Some(g) = goal {
                out.push_str(&format!("# goal {}: {}\n", g.label, render(&g.formula)));
            }
        };
        let mut out = String::new();
        match self {
            Evidence::Proof { premises, goal, proof, .. } => {
                header(&mut out, premises, goal.as_ref());
                out.push_str(&proof.to_string());
            }
            Evidence::Countermodel { premises, goal, model } => {
                header(&mut out, premises, Some(goal));
                out.push_str(&model.to_text());
            }
            Evidence::Model { axioms, model } => {
                header(&mut out, axioms, None);
                out.push_str(&model.to_text());
            }
            _ => return None,
        }
        Some(out)
    }

    /// Re-checks the evidence from scratch: proofs against a fresh
    /// clausification, structures by evaluation, memberships by alpha
    /// comparison. Budget reports and notes carry no claim.
    pub fn recheck(&self) -> bool {
        match self {
            Evidence::Proof { signature, premises, goal, proof } => {
                let mut inputs = premises.clone();
                if let Some(g) = goal {
                    inputs.push(NamedFormula::new(NEGATED_GOAL, Formula::not(g.formula.clone())));
                }
                let cs = clausify_all(signature, &inputs, ClausifyOptions::default());
                check_proof(proof, &cs.clauses)
            }
            Evidence::Countermodel { premises, goal, model } => {
                premises.iter().all(|p| holds(model, &p.formula) == Ok(true))
                    && holds(model, &goal.formula) == Ok(false)
            }
            Evidence::Model { axioms, model } => axioms.iter().all(|p| holds(model, &p.formula) == Ok(true)),
            Evidence::Membership { formula, axiom } => alpha_equal(formula, &axiom.formula),
            Evidence::NonMembership { formula, axioms, .. } => !axioms.iter().any(|a| alpha_equal(formula, &a.formula)),
            Evidence::Vacuous { .. } | Evidence::Exhausted { .. } | Evidence::Note(_) => true,
        }
    }

    /// True for evidence that can carry a Yes or No on its own.
    pub fn is_decisive(&self) -> bool {
        !matches!(self, Evidence::Exhausted { .. } | Evidence::Note(_))
    }
}

/// A three-valued verdict together with its evidence.
#[derive(Clone, Debug)]
pub struct ThreeValued {
    pub truth: Truth,
    pub evidence: Vec<Evidence>,
}

impl ThreeValued {
    pub fn yes(evidence: Vec<Evidence>) -> Self {
        ThreeValued { truth: Truth::Yes, evidence }
    }

    pub fn no(evidence: Vec<Evidence>) -> Self {
        ThreeValued { truth: Truth::No, evidence }
    }

    pub fn unknown(evidence: Vec<Evidence>) -> Self {
        ThreeValued { truth: Truth::Unknown, evidence }
    }

    pub fn is_yes(&self) -> bool {
        self.truth == Truth::Yes
    }

    pub fn is_no(&self) -> bool {
        self.truth == Truth::No
    }

    /// Every piece of evidence re-checks, and a Yes or No has at least one
    /// decisive piece.
    pub fn recheck(&self) -> bool {
        let decisive = self.truth == Truth::Unknown || self.evidence.iter().any(Evidence::is_decisive);
        decisive && self.evidence.iter().all(Evidence::recheck)
    }
}
