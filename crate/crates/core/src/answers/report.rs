use serde::{Deserialize, Serialize};

use crate::logic::Theory;

use super::registry::Registry;
use super::relations::{both_ways, nonworse_lifted, piecewise_lifted, strictly, Witness};
use super::verdict::{Evidence, ThreeValued, Truth};
use super::{lift_pair, AnswerError, Limits, Mode};

/// Version tag of the report layout.
pub const SCHEMA: &str = "v1";

/// Everything known about `left` versus `right`. The directed relations
/// read "left is (piecewise) nonworse/better than right".
#[derive(Clone, Debug)]
pub struct Comparison {
    pub left: String,
    pub right: String,
    /// Set when the theories were lifted to the union of their signatures.
    pub lifted: bool,
    pub modes: Vec<Mode>,
    pub limits: Limits,
    pub nonworse: Option<ThreeValued>,
    pub piecewise_nonworse: Option<ThreeValued>,
    pub witnesses: Vec<Witness>,
    pub equivalent_nonworse: Option<ThreeValued>,
    pub equivalent_piecewise: Option<ThreeValued>,
    pub better: Option<ThreeValued>,
    pub piecewise_better: Option<ThreeValued>,
}

struct Directed {
    nonworse: Option<ThreeValued>,
    piecewise: Option<ThreeValued>,
    witnesses: Vec<Witness>,
}

/// One direction of the comparison. A piecewise Yes settles nonworse, and
/// a nonworse No (always a countermodel to all of `t1`) settles piecewise.
fn directed(t2: &Theory, t1: &Theory, modes: &[Mode], limits: &Limits) -> Directed {
    let mut piecewise = None;
    let mut witnesses = Vec::new();
    if modes.contains(&Mode::Piecewise) {
        let p = piecewise_lifted(t2, t1, limits);
        witnesses = p.witnesses;
        piecewise = Some(p.verdict);
    }
    let mut nonworse = None;
    if modes.contains(&Mode::Nonworse) {
        let nw = match &piecewise {
            Some(p) if p.is_yes() => {
                let mut evidence = vec![Evidence::Note("implied by piecewise nonworse".into())];
                evidence.extend(p.evidence.iter().cloned());
                ThreeValued::yes(evidence)
            }
            _ if t2.is_alpha_subset_of(t1) => piecewise_lifted(t2, t1, limits).verdict,
            _ => nonworse_lifted(t2, t1, limits),
        };
        if let Some(p) = piecewise.as_mut() {
            if nw.is_no() && p.truth == Truth::Unknown {
                *p = ThreeValued::no(nw.evidence.clone());
            }
        }
        nonworse = Some(nw);
    }
    Directed { nonworse, piecewise, witnesses }
}

/// Compares two theories under the requested preorders.
pub fn compare_theories(left: &Theory, right: &Theory, modes: &[Mode], limits: &Limits) -> Result<Comparison, AnswerError> {
    let (l, r, lifted) = lift_pair(left, right)?;
    let mut modes = modes.to_vec();
    modes.sort();
    modes.dedup();
    let there = directed(&l, &r, &modes, limits);
    let back = directed(&r, &l, &modes, limits);
    let equiv = |a: &Option<ThreeValued>, b: &Option<ThreeValued>| match (a, b) {
        (Some(a), Some(b)) => Some(both_ways(a, b)),
        _ => None,
    };
    let equivalent_nonworse = equiv(&there.nonworse, &back.nonworse);
    let equivalent_piecewise = equiv(&there.piecewise, &back.piecewise);
    let strict = |rel: &Option<ThreeValued>, eq: &Option<ThreeValued>| match (rel, eq) {
        (Some(rel), Some(eq)) => Some(strictly(rel, eq)),
        _ => None,
    };
    Ok(Comparison {
        left: left.name().to_string(),
        right: right.name().to_string(),
        lifted,
        better: strict(&there.nonworse, &equivalent_nonworse),
        piecewise_better: strict(&there.piecewise, &equivalent_piecewise),
        nonworse: there.nonworse,
        piecewise_nonworse: there.piecewise,
        witnesses: there.witnesses,
        equivalent_nonworse,
        equivalent_piecewise,
        modes,
        limits: *limits,
    })
}

/// A piece of evidence as it appears in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRef {
    pub kind: String,
    pub subject: String,
    /// Where the proof or structure was written, relative to the registry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub value: Truth,
    pub evidence: Vec<EvidenceRef>,
}

impl VerdictReport {
    pub fn new(v: &ThreeValued, store: &mut dyn FnMut(&Evidence) -> Option<String>) -> Self {
        let evidence = v
            .evidence
            .iter()
            .map(|e| EvidenceRef { kind: e.kind().to_string(), subject: e.subject(), path: store(e) })
            .collect();
        VerdictReport { value: v.truth, evidence }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModePair {
    pub nonworse: Option<VerdictReport>,
    pub piecewise: Option<VerdictReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub max_clauses: usize,
    pub max_steps: usize,
    pub wall_time_secs: f64,
    pub max_domain: usize,
}

impl From<&Limits> for BudgetReport {
    fn from(l: &Limits) -> Self {
        BudgetReport {
            max_clauses: l.budget.max_clauses,
            max_steps: l.budget.max_derivation_steps,
            wall_time_secs: l.budget.wall_time.as_secs_f64(),
            max_domain: l.max_domain,
        }
    }
}

/// Serializable form of a [`Comparison`], with evidence by reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema: String,
    pub left: String,
    pub right: String,
    pub signature_lifted: bool,
    pub modes: Vec<Mode>,
    pub nonworse: Option<VerdictReport>,
    pub piecewise_nonworse: Option<VerdictReport>,
    pub witnesses: Vec<Witness>,
    pub equivalent: ModePair,
    pub better: ModePair,
    pub budget: BudgetReport,
}

impl Comparison {
    /// The report; `store` files each artifact and returns its path.
    pub fn report(&self, store: &mut dyn FnMut(&Evidence) -> Option<String>) -> ComparisonReport {
        let mut one = |v: &Option<ThreeValued>| v.as_ref().map(|v| VerdictReport::new(v, store));
        ComparisonReport {
            schema: SCHEMA.to_string(),
            left: self.left.clone(),
            right: self.right.clone(),
            signature_lifted: self.lifted,
            modes: self.modes.clone(),
            nonworse: one(&self.nonworse),
            piecewise_nonworse: one(&self.piecewise_nonworse),
            witnesses: self.witnesses.clone(),
            equivalent: ModePair { nonworse: one(&self.equivalent_nonworse), piecewise: one(&self.equivalent_piecewise) },
            better: ModePair { nonworse: one(&self.better), piecewise: one(&self.piecewise_better) },
            budget: BudgetReport::from(&self.limits),
        }
    }

    /// Every verdict with its evidence, for re-checking.
    pub fn verdicts(&self) -> Vec<(&'static str, &ThreeValued)> {
        [
            ("nonworse", &self.nonworse),
            ("piecewise_nonworse", &self.piecewise_nonworse),
            ("equivalent_nonworse", &self.equivalent_nonworse),
            ("equivalent_piecewise", &self.equivalent_piecewise),
            ("better", &self.better),
            ("piecewise_better", &self.piecewise_better),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compares two registry theories, consulting and updating the report
/// cache. Report names are the registry names.
pub fn compare(left: &str, right: &str, reg: &Registry, modes: &[Mode], limits: &Limits) -> Result<ComparisonReport, AnswerError> {
    let key = reg.cache_key(left, right, modes, limits)?;
    if let Some(hit) = reg.cached_report(&key) {
        return Ok(hit);
    }
    let mut c = compare_theories(reg.get(left)?, reg.get(right)?, modes, limits)?;
    c.left = left.to_string();
    c.right = right.to_string();
    let mut failure = None;
    let report = c.report(&mut |e| match reg.store_evidence(e) {
        Ok(path) => path,
        Err(err) => {
            failure.get_or_insert(err);
            None
        }
    });
    if let Some(err) = failure {
        return Err(err.into());
    }
    reg.store_report(&key, &report)?;
    Ok(report)
}
