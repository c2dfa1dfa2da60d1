use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::sync::Arc;
use std::time::Instant;

use crate::logic::{Signature, Substitution, Term, Var};

use super::clause::{literal_mask, subsumes, tag_vars, Clause, Literal, Origin};
use super::proof::{factor, resolvent_tagged, Proof, ProofStep, Rule, LEFT_TAG, RIGHT_TAG};
use super::unify::unify_args;
use super::{Budget, Stats, UnknownReason};

#[derive(Clone, Debug)]
enum Derivation {
    Input(String),
    Resolution { left: usize, li: usize, right: usize, ri: usize, unifier: Vec<(Var, Term)> },
    Factoring { parent: usize, kept: usize, removed: usize, unifier: Vec<(Var, Term)> },
}

/// (sign, predicate) -> active (clause, literal) pairs.
type LiteralIndex = BTreeMap<(bool, Arc<str>), Vec<(usize, usize)>>;

struct Node {
    lits: Vec<Literal>,
    /// `lits` with variables tagged as a right parent; filled on activation.
    tagged: Vec<Literal>,
    mask: u64,
    derivation: Derivation,
}

impl Node {
    fn new(lits: Vec<Literal>, derivation: Derivation) -> Self {
        Node { tagged: Vec::new(), mask: literal_mask(&lits), lits, derivation }
    }
}

pub(crate) enum Saturation {
    Refuted(Proof),
    Open(UnknownReason),
}

/// Given-clause loop: smallest clause (by symbol count, then age) first,
/// with binary resolution, factoring, tautology deletion and forward and
/// backward subsumption.
pub(crate) fn saturate(clauses: &[Clause], sig: &Signature, budget: &Budget, stats: &mut Stats) -> Saturation {
    let start = Instant::now();
    let mut nodes: Vec<Node> = Vec::new();
    let mut passive: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut active: Vec<usize> = Vec::new();
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut index: LiteralIndex = BTreeMap::new();

    for c in clauses {
        let label = match &c.origin {
            Origin::Input(l) => l.clone(),
            Origin::Derived(n) => format!("derived_{n}"),
        };
        if c.is_empty() {
            nodes.push(Node::new(Vec::new(), Derivation::Input(label)));
            return Saturation::Refuted(extract(&nodes, nodes.len() - 1, sig));
        }
        passive.push(Reverse((c.size(), nodes.len())));
        nodes.push(Node::new(c.literals.clone(), Derivation::Input(label)));
    }
    stats.generated = nodes.len();

    while let Some(Reverse((_, given))) = passive.pop() {
        if start.elapsed() >= budget.wall_time {
            return Saturation::Open(UnknownReason::Timeout);
        }
        if stats.given >= budget.max_derivation_steps {
            return Saturation::Open(UnknownReason::StepLimit);
        }
        stats.given += 1;
        let g = nodes[given].lits.clone();
        let gm = nodes[given].mask;
        if active.iter().any(|&a| nodes[a].mask & !gm == 0 && subsumes(sig, &nodes[a].lits, &g)) {
            continue;
        }
        for &a in &active {
            if gm & !nodes[a].mask == 0 && subsumes(sig, &g, &nodes[a].lits) {
                removed.insert(a);
            }
        }
        if !removed.is_empty() {
            active.retain(|a| !removed.contains(a));
            for list in index.values_mut() {
                list.retain(|(c, _)| !removed.contains(c));
            }
            removed.clear();
        }
        nodes[given].tagged = tag_vars(&g, RIGHT_TAG);
        active.push(given);
        for (i, l) in g.iter().enumerate() {
            index.entry((l.positive, l.pred.clone())).or_default().push((given, i));
        }

        let mut fresh: Vec<(Vec<Literal>, Derivation)> = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let (a, b) = (&g[i], &g[j]);
                if a.positive != b.positive || a.pred != b.pred {
                    continue;
                }
                if let Some(s) = unify_args(sig, &a.args, &b.args) {
                    fresh.push((
                        factor(&g, &s),
                        Derivation::Factoring { parent: given, kept: i, removed: j, unifier: pairs(&s) },
                    ));
                }
            }
        }
        let tagged_given = tag_vars(&g, LEFT_TAG);
        for (i, l) in tagged_given.iter().enumerate() {
            let Some(partners) = index.get(&(!l.positive, l.pred.clone())) else { continue };
            for &(other, j) in partners {
                if let Some(s) = unify_args(sig, &l.args, &nodes[other].tagged[j].args) {
                    fresh.push((
                        resolvent_tagged(&tagged_given, i, &nodes[other].tagged, j, &s),
                        Derivation::Resolution { left: given, li: i, right: other, ri: j, unifier: pairs(&s) },
                    ));
                }
            }
        }

        for (lits, derivation) in fresh {
            let c = Clause::new(lits, Origin::Derived(nodes.len()));
            if c.is_tautology() {
                continue;
            }
            stats.generated += 1;
            let empty = c.is_empty();
            passive.push(Reverse((c.size(), nodes.len())));
            nodes.push(Node::new(c.literals, derivation));
            if empty {
                return Saturation::Refuted(extract(&nodes, nodes.len() - 1, sig));
            }
            if stats.generated >= budget.max_clauses {
                return Saturation::Open(UnknownReason::ClauseLimit);
            }
        }
    }
    Saturation::Open(UnknownReason::Saturated)
}

fn pairs(s: &Substitution) -> Vec<(Var, Term)> {
    s.iter().map(|(v, t)| (v.clone(), t.clone())).collect()
}

/// Ancestors of `root`, renumbered from 1 in derivation order.
fn extract(nodes: &[Node], root: usize, sig: &Signature) -> Proof {
    let mut needed = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if !needed.insert(n) {
            continue;
        }
        match &nodes[n].derivation {
            Derivation::Input(_) => {}
            Derivation::Resolution { left, right, .. } => {
                stack.push(*left);
                stack.push(*right);
            }
            Derivation::Factoring { parent, .. } => stack.push(*parent),
        }
    }
    let numbering: BTreeMap<usize, usize> = needed.iter().enumerate().map(|(k, &n)| (n, k + 1)).collect();
    let steps = needed
        .iter()
        .map(|&n| {
            let rule = match &nodes[n].derivation {
                Derivation::Input(label) => Rule::Input { label: label.clone() },
                Derivation::Resolution { left, li, right, ri, unifier } => Rule::Resolution {
                    left: numbering[left],
                    left_literal: *li,
                    right: numbering[right],
                    right_literal: *ri,
                    unifier: unifier.clone(),
                },
                Derivation::Factoring { parent, kept, removed, unifier } => Rule::Factoring {
                    parent: numbering[parent],
                    kept: *kept,
                    removed: *removed,
                    unifier: unifier.clone(),
                },
            };
            ProofStep { id: numbering[&n], clause: nodes[n].lits.clone(), rule }
        })
        .collect();
    Proof { steps, signature: sig.clone() }
}
