use serde::{Deserialize, Serialize};

use crate::logic::{signature_union, split_conjunctions, NamedFormula, Theory};
use crate::model::{countermodel, find_model_upto, ModelOutcome};
use crate::prover::{entails, refute, Outcome, UnknownReason};
use crate::specrel::requires_infinite_domain;

use super::verdict::{Evidence, ThreeValued, Truth};
use super::{lift_for, lift_pair, AnswerError, Limits, Mode, WhyQuestion};

pub(crate) const NO_FINITE_WITNESS: &str = "no finite witness possible under AxField";

const GOAL: &str = "goal";

pub(crate) enum Decision {
    Proved(Evidence),
    Refuted(Evidence),
    Open(Vec<Evidence>),
}

fn finite_search_note(th: &Theory) -> Option<Evidence> {
    requires_infinite_domain(th).then(|| Evidence::Note(format!("{}: {NO_FINITE_WITNESS}", th.name())))
}

/// `premises |= goal`: membership, then the prover, then a countermodel.
pub(crate) fn decide(premises: &Theory, goal: &NamedFormula, limits: &Limits) -> Decision {
    if let Some(ax) = premises.find_alpha(&goal.formula) {
        return Decision::Proved(Evidence::Membership { formula: goal.formula.clone(), axiom: ax.clone() });
    }
    let query = format!("{} |= {}", premises.name(), goal.label);
    let verdict = entails(premises, &goal.formula, &limits.budget);
    let reason = match verdict.outcome {
        Outcome::Proved(proof) => {
            return Decision::Proved(Evidence::Proof {
                signature: premises.signature().clone(),
                premises: premises.axioms().to_vec(),
                goal: Some(goal.clone()),
                proof,
            })
        }
        Outcome::Unknown(r) => r,
    };
    let mut open = vec![Evidence::Exhausted { query: format!("proof of {query}"), reason }];
    if let Some(note) = finite_search_note(premises) {
        open.push(note);
        return Decision::Open(open);
    }
    match countermodel(premises, &goal.formula, &limits.domains(premises.signature()), &limits.budget) {
        ModelOutcome::Found(model) => {
            Decision::Refuted(Evidence::Countermodel { premises: premises.axioms().to_vec(), goal: goal.clone(), model })
        }
        ModelOutcome::Unknown(reason) => {
            open.push(Evidence::Exhausted { query: format!("countermodel to {query}"), reason });
            Decision::Open(open)
        }
        ModelOutcome::NotFound => {
            open.push(Evidence::Exhausted { query: format!("countermodel to {query}"), reason: UnknownReason::SizeBound });
            Decision::Open(open)
        }
    }
}

/// Consistency: a finite model, a refutation, or Unknown.
pub(crate) fn consistency(th: &Theory, limits: &Limits) -> ThreeValued {
    let mut open = Vec::new();
    match finite_search_note(th) {
        Some(note) => open.push(note),
        None => match find_model_upto(th, &limits.domains(th.signature()), &limits.budget) {
            ModelOutcome::Found(model) => return ThreeValued::yes(vec![Evidence::Model { axioms: th.axioms().to_vec(), model }]),
            ModelOutcome::NotFound => open.push(Evidence::Exhausted {
                query: format!("model of {}", th.name()),
                reason: UnknownReason::SizeBound,
            }),
            ModelOutcome::Unknown(reason) => open.push(Evidence::Exhausted { query: format!("model of {}", th.name()), reason }),
        },
    }
    let verdict = refute(th.signature(), th.axioms(), &limits.budget);
    match verdict.outcome {
        Outcome::Proved(proof) => ThreeValued::no(vec![Evidence::Proof {
            signature: th.signature().clone(),
            premises: th.axioms().to_vec(),
            goal: None,
            proof,
        }]),
        Outcome::Unknown(reason) => {
            open.push(Evidence::Exhausted { query: format!("refutation of {}", th.name()), reason });
            ThreeValued::unknown(open)
        }
    }
}

/// Whether `th` is a possible answer to `q`: consistent, and without P
/// among its axioms.
pub fn is_possible(th: &Theory, q: &WhyQuestion, limits: &Limits) -> Result<ThreeValued, AnswerError> {
    let th = lift_for(th, q)?;
    Ok(possible_lifted(&th, q, limits))
}

fn possible_lifted(th: &Theory, q: &WhyQuestion, limits: &Limits) -> ThreeValued {
    if let Some(ax) = th.find_alpha(&q.statement) {
        return ThreeValued::no(vec![Evidence::Membership { formula: q.statement.clone(), axiom: ax.clone() }]);
    }
    let absent = Evidence::NonMembership {
        formula: q.statement.clone(),
        theory: th.name().to_string(),
        axioms: th.axioms().to_vec(),
    };
    let mut c = consistency(th, limits);
    if c.truth != Truth::No {
        c.evidence.insert(0, absent);
    }
    c
}

/// Whether `th` is an acceptable answer to `q`: a possible answer that
/// entails P. A countermodel to the entailment also gives No.
pub fn is_acceptable(th: &Theory, q: &WhyQuestion, limits: &Limits) -> Result<ThreeValued, AnswerError> {
    let th = lift_for(th, q)?;
    let possible = possible_lifted(&th, q, limits);
    if possible.is_no() {
        return Ok(possible);
    }
    let goal = NamedFormula::new(GOAL, q.statement.clone());
    Ok(match decide(&th, &goal, limits) {
        Decision::Refuted(e) => ThreeValued::no(vec![e]),
        Decision::Proved(e) => {
            let mut evidence = possible.evidence;
            evidence.push(e);
            ThreeValued { truth: possible.truth, evidence }
        }
        Decision::Open(es) => {
            let mut evidence = possible.evidence;
            evidence.extend(es);
            ThreeValued::unknown(evidence)
        }
    })
}

/// Whether `t2` is nonworse than `t1`: every axiom of `t2` follows from `t1`.
pub fn nonworse(t2: &Theory, t1: &Theory, limits: &Limits) -> Result<ThreeValued, AnswerError> {
    let (t2, t1, _) = lift_pair(t2, t1)?;
    Ok(nonworse_lifted(&t2, &t1, limits))
}

pub(crate) fn nonworse_lifted(t2: &Theory, t1: &Theory, limits: &Limits) -> ThreeValued {
    if t2.is_empty() {
        return ThreeValued::yes(vec![Evidence::Vacuous { theory: t2.name().to_string() }]);
    }
    let mut evidence = Vec::new();
    let mut open = false;
    for ax in t2.axioms() {
        match decide(t1, ax, limits) {
            Decision::Proved(e) => evidence.push(e),
            Decision::Refuted(e) => return ThreeValued::no(vec![e]),
            Decision::Open(es) => {
                open = true;
                evidence.extend(es);
            }
        }
    }
    ThreeValued { truth: if open { Truth::Unknown } else { Truth::Yes }, evidence }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// The axiom itself occurs on the other side.
    Identity,
    /// A single axiom on the other side proves it.
    Proof,
    /// Not resolved.
    Missing,
}

/// Which axiom of the stronger theory accounts for `axiom`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: String,
    pub by: Option<String>,
    pub kind: WitnessKind,
}

#[derive(Clone, Debug)]
pub struct Piecewise {
    pub verdict: ThreeValued,
    pub witnesses: Vec<Witness>,
}

/// Whether `t2` is piecewise nonworse than `t1`: each axiom of `t2`
/// follows from a single axiom of `t1`. Axioms of `t2` occurring in `t1`
/// are witnessed by themselves without a proof search.
pub fn piecewise_nonworse(t2: &Theory, t1: &Theory, limits: &Limits) -> Result<Piecewise, AnswerError> {
    let (t2, t1, _) = lift_pair(t2, t1)?;
    Ok(piecewise_lifted(&t2, &t1, limits))
}

pub(crate) fn piecewise_lifted(t2: &Theory, t1: &Theory, limits: &Limits) -> Piecewise {
    let mut witnesses = Vec::new();
    let mut evidence = Vec::new();
    let mut open = false;
    if t2.is_empty() {
        evidence.push(Evidence::Vacuous { theory: t2.name().to_string() });
    }
    let missing = |ax: &NamedFormula| Witness { axiom: ax.label.clone(), by: None, kind: WitnessKind::Missing };
    for ax in t2.axioms() {
        if let Some(same) = t1.find_alpha(&ax.formula) {
            witnesses.push(Witness { axiom: ax.label.clone(), by: Some(same.label.clone()), kind: WitnessKind::Identity });
            evidence.push(Evidence::Membership { formula: ax.formula.clone(), axiom: same.clone() });
            continue;
        }
        if t1.is_empty() {
            witnesses.push(missing(ax));
            return Piecewise { verdict: ThreeValued::no(vec![Evidence::Vacuous { theory: t1.name().to_string() }]), witnesses };
        }
        // A countermodel to all of t1 is one to each of its axioms.
        let mut open_here = Vec::new();
        match finite_search_note(t1) {
            Some(note) => open_here.push(note),
            None => {
                if let ModelOutcome::Found(model) =
                    countermodel(t1, &ax.formula, &limits.domains(t1.signature()), &limits.budget)
                {
                    witnesses.push(missing(ax));
                    let e = Evidence::Countermodel { premises: t1.axioms().to_vec(), goal: ax.clone(), model };
                    return Piecewise { verdict: ThreeValued::no(vec![e]), witnesses };
                }
            }
        }
        let mut refuted = Vec::new();
        let mut found = None;
        for phi in t1.axioms() {
            let single = Theory::new(format!("{}.{}", t1.name(), phi.label), t1.signature().clone(), vec![phi.clone()])
                .expect("an axiom of a valid theory");
            match decide(&single, ax, limits) {
                Decision::Proved(e) => {
                    found = Some((phi.label.clone(), e));
                    break;
                }
                Decision::Refuted(e) => refuted.push(e),
                Decision::Open(es) => open_here.extend(es),
            }
        }
        match found {
            Some((by, e)) => {
                witnesses.push(Witness { axiom: ax.label.clone(), by: Some(by), kind: WitnessKind::Proof });
                evidence.push(e);
            }
            None if refuted.len() == t1.len() => {
                witnesses.push(missing(ax));
                return Piecewise { verdict: ThreeValued::no(refuted), witnesses };
            }
            None => {
                witnesses.push(missing(ax));
                open = true;
                evidence.extend(open_here);
            }
        }
    }
    let truth = if open { Truth::Unknown } else { Truth::Yes };
    Piecewise { verdict: ThreeValued { truth, evidence }, witnesses }
}

pub(crate) fn relation(mode: Mode, t2: &Theory, t1: &Theory, limits: &Limits) -> ThreeValued {
    match mode {
        Mode::Nonworse => nonworse_lifted(t2, t1, limits),
        Mode::Piecewise => piecewise_lifted(t2, t1, limits).verdict,
    }
}

/// Equivalence from the two directions of a preorder.
pub(crate) fn both_ways(there: &ThreeValued, back: &ThreeValued) -> ThreeValued {
    let joined = || there.evidence.iter().chain(&back.evidence).cloned().collect();
    match (there.truth, back.truth) {
        (Truth::Yes, Truth::Yes) => ThreeValued::yes(joined()),
        (Truth::No, _) => ThreeValued::no(there.evidence.clone()),
        (_, Truth::No) => ThreeValued::no(back.evidence.clone()),
        _ => ThreeValued::unknown(joined()),
    }
}

/// Strict improvement from the relation and the equivalence verdict.
pub(crate) fn strictly(rel: &ThreeValued, equiv: &ThreeValued) -> ThreeValued {
    match (rel.truth, equiv.truth) {
        (Truth::No, _) => ThreeValued::no(rel.evidence.clone()),
        (_, Truth::Yes) => ThreeValued::no(equiv.evidence.clone()),
        (Truth::Yes, Truth::No) => ThreeValued::yes(rel.evidence.iter().chain(&equiv.evidence).cloned().collect()),
        (Truth::Yes, Truth::Unknown) => {
            let mut evidence = vec![Evidence::Note("nonworse proven, strictness unresolved".into())];
            evidence.extend(equiv.evidence.iter().cloned());
            ThreeValued::unknown(evidence)
        }
        _ => ThreeValued::unknown(rel.evidence.iter().chain(&equiv.evidence).cloned().collect()),
    }
}

/// Whether `t1` and `t2` are equivalent under the mode's preorder.
pub fn equivalent(t1: &Theory, t2: &Theory, mode: Mode, limits: &Limits) -> Result<ThreeValued, AnswerError> {
    let (t1, t2, _) = lift_pair(t1, t2)?;
    let there = relation(mode, &t1, &t2, limits);
    if there.is_no() {
        return Ok(there);
    }
    Ok(both_ways(&there, &relation(mode, &t2, &t1, limits)))
}

/// Whether `t2` is a better answer than `t1`: related by the mode's
/// preorder and not equivalent.
pub fn better(t2: &Theory, t1: &Theory, mode: Mode, limits: &Limits) -> Result<ThreeValued, AnswerError> {
    let (t2, t1, _) = lift_pair(t2, t1)?;
    Ok(better_lifted(&t2, &t1, mode, limits))
}

fn better_lifted(t2: &Theory, t1: &Theory, mode: Mode, limits: &Limits) -> ThreeValued {
    let rel = relation(mode, t2, t1, limits);
    if rel.is_no() {
        return rel;
    }
    let back = relation(mode, t1, t2, limits);
    strictly(&rel, &both_ways(&rel, &back))
}

/// How one member of the candidate pool fared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub name: String,
    /// Yes: a witness of pointlessness. No: ruled out. Unknown: undecided.
    pub truth: Truth,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Pointless {
    pub verdict: ThreeValued,
    pub witness: Option<Theory>,
    pub candidates: Vec<CandidateOutcome>,
}

/// Whether `th` is a pointless answer to `q`: some consistent candidate
/// with P among its axioms is a piecewise better answer.
///
/// The pool is `candidates` followed by `split_conjunctions(th)`. A
/// candidate whose signature conflicts with `th` or the question is left
/// out and reported as such.
pub fn is_pointless(th: &Theory, q: &WhyQuestion, candidates: &[Theory], limits: &Limits) -> Result<Pointless, AnswerError> {
    let th = lift_for(th, q)?;
    let pool: Vec<Theory> = candidates.iter().cloned().chain(Some(split_conjunctions(&th))).collect();
    let mut outcomes = Vec::new();
    let mut refutations = Vec::new();
    let mut open = Vec::new();
    let mut undecided = false;
    for c in &pool {
        let name = c.name().to_string();
        let sig = match signature_union(c.signature(), th.signature()) {
            Ok(sig) => sig,
            Err(e) => {
                outcomes.push(CandidateOutcome { name, truth: Truth::Unknown, detail: format!("left out: {e}") });
                continue;
            }
        };
        let (c, t) = (c.lift(&sig).expect("union covers it"), th.lift(&sig).expect("union covers it"));
        let Some(p) = c.find_alpha(&q.statement).cloned() else {
            outcomes.push(CandidateOutcome { name, truth: Truth::No, detail: "does not contain the statement".into() });
            refutations.push(Evidence::NonMembership {
                formula: q.statement.clone(),
                theory: c.name().to_string(),
                axioms: c.axioms().to_vec(),
            });
            continue;
        };
        let b = better_lifted(&c, &t, Mode::Piecewise, limits);
        if b.is_no() {
            outcomes.push(CandidateOutcome { name, truth: Truth::No, detail: "not piecewise better".into() });
            refutations.extend(b.evidence);
            continue;
        }
        let cons = consistency(&c, limits);
        if cons.is_no() {
            outcomes.push(CandidateOutcome { name, truth: Truth::No, detail: "inconsistent".into() });
            refutations.extend(cons.evidence);
            continue;
        }
        if b.is_yes() && cons.is_yes() {
            outcomes.push(CandidateOutcome { name, truth: Truth::Yes, detail: "piecewise better, consistent, contains the statement".into() });
            let mut evidence = vec![Evidence::Membership { formula: q.statement.clone(), axiom: p }];
            evidence.extend(b.evidence);
            evidence.extend(cons.evidence);
            return Ok(Pointless { verdict: ThreeValued::yes(evidence), witness: Some(c), candidates: outcomes });
        }
        let detail = match (b.truth, cons.truth) {
            (Truth::Yes, _) => "piecewise better; consistency unresolved",
            (_, Truth::Yes) => "consistent; betterness unresolved",
            _ => "betterness and consistency unresolved",
        };
        outcomes.push(CandidateOutcome { name, truth: Truth::Unknown, detail: detail.into() });
        undecided = true;
        open.extend(b.evidence);
        open.extend(cons.evidence);
    }
    let verdict = if undecided {
        ThreeValued::unknown(open)
    } else {
        ThreeValued::no(refutations)
    };
    Ok(Pointless { verdict, witness: None, candidates: outcomes })
}
