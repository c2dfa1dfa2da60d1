//! Flattening and grounding of clauses over fixed finite domains.
//!
//! Propositional variables stand for `R(e1..en)` and `f(e1..en) = v`.
//! Totality and functionality clauses make every satisfying assignment
//! decode to a total function table.

use std::collections::BTreeMap;

use crate::logic::{Signature, Sort, Term, Var};
use crate::prover::{Clause, EQUALS};

use super::interp::{DomainAssignment, FiniteInterpretation};
use super::sat::{neg, pos, Lit, Solver};

#[derive(Clone, Debug)]
enum FlatLit {
    Rel { positive: bool, name: String, args: Vec<usize> },
    /// `f(args) = result` or its negation.
    Func { positive: bool, name: String, args: Vec<usize>, result: usize },
    Eq { positive: bool, a: usize, b: usize },
}

/// A clause whose atoms mention only variables, numbered `0..sorts.len()`.
#[derive(Clone, Debug)]
struct FlatClause {
    sorts: Vec<Sort>,
    lits: Vec<FlatLit>,
}

struct Flattener<'a> {
    sig: &'a Signature,
    index: BTreeMap<Var, usize>,
    sorts: Vec<Sort>,
    extra: Vec<FlatLit>,
}

impl Flattener<'_> {
    fn var_of(&mut self, v: &Var) -> usize {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        self.sorts.push(v.sort.clone());
        self.index.insert(v.clone(), self.sorts.len() - 1);
        self.sorts.len() - 1
    }

    fn fresh(&mut self, sort: Sort) -> usize {
        self.sorts.push(sort);
        self.sorts.len() - 1
    }

    /// A variable standing for `t`, adding `f(..) != y` side literals.
    fn term(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(v) => self.var_of(v),
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.term(a)).collect();
                let sort = self.sig.function(f).expect("declared function").result.clone();
                let y = self.fresh(sort);
                self.extra.push(FlatLit::Func { positive: false, name: f.to_string(), args, result: y });
                y
            }
        }
    }

    fn app_eq(&mut self, positive: bool, f: &str, args: &[Term], y: usize) -> FlatLit {
        let args = args.iter().map(|a| self.term(a)).collect();
        FlatLit::Func { positive, name: f.to_string(), args, result: y }
    }
}

fn flatten(sig: &Signature, c: &Clause) -> FlatClause {
    let mut fl = Flattener { sig, index: BTreeMap::new(), sorts: Vec::new(), extra: Vec::new() };
    let mut lits = Vec::new();
    for l in &c.literals {
        if &*l.pred == EQUALS {
            let (a, b) = (&l.args[0], &l.args[1]);
            let lit = match (a, b) {
                (Term::App(f, args), Term::Var(_)) => {
                    let y = fl.term(b);
                    fl.app_eq(l.positive, f, args, y)
                }
                (_, Term::App(g, args)) => {
                    let x = fl.term(a);
                    fl.app_eq(l.positive, g, args, x)
                }
                _ => FlatLit::Eq { positive: l.positive, a: fl.term(a), b: fl.term(b) },
            };
            lits.push(lit);
        } else {
            let args = l.args.iter().map(|t| fl.term(t)).collect();
            lits.push(FlatLit::Rel { positive: l.positive, name: l.pred.to_string(), args });
        }
    }
    lits.extend(fl.extra);
    FlatClause { sorts: fl.sorts, lits }
}

/// Variable layout for one signature at one domain assignment.
pub(crate) struct Layout {
    sizes: BTreeMap<Sort, usize>,
    /// name -> (first variable, argument sorts, result size or 1 for relations)
    blocks: BTreeMap<String, (usize, Vec<Sort>, usize)>,
    pub num_vars: usize,
}

impl Layout {
    fn new(sig: &Signature, d: &DomainAssignment) -> Self {
        let sizes: BTreeMap<Sort, usize> = d.sizes().iter().cloned().collect();
        let mut blocks = BTreeMap::new();
        let mut next = 0;
        let rows = |args: &[Sort]| args.iter().map(|s| sizes[s]).product::<usize>();
        for f in sig.functions() {
            let width = sizes[&f.result];
            blocks.insert(f.name.clone(), (next, f.args.clone(), width));
            next += rows(&f.args) * width;
        }
        for r in sig.relations() {
            blocks.insert(r.name.clone(), (next, r.args.clone(), 1));
            next += rows(&r.args);
        }
        Layout { sizes, blocks, num_vars: next }
    }

    fn row(&self, args: &[Sort], vals: &[usize]) -> usize {
        args.iter().zip(vals).fold(0, |k, (s, &v)| k * self.sizes[s] + v)
    }

    fn rel_var(&self, name: &str, vals: &[usize]) -> usize {
        let (base, args, _) = &self.blocks[name];
        base + self.row(args, vals)
    }

    fn func_var(&self, name: &str, vals: &[usize], value: usize) -> usize {
        let (base, args, width) = &self.blocks[name];
        base + self.row(args, vals) * width + value
    }
}

pub(crate) enum Grounding {
    Ready(Solver, Layout),
    TooLarge,
}

/// Grounds `clauses` (over `sig`) at `d`. Gives up when the clauses have
/// more than `max_clauses` instances or more than that many ground clauses
/// would be produced.
pub(crate) fn ground(sig: &Signature, clauses: &[Clause], d: &DomainAssignment, max_clauses: usize) -> Grounding {
    let layout = Layout::new(sig, d);
    // Every instance counts against the limit, including those that an
    // equality literal satisfies, so oversized problems fail before grounding.
    let flats: Vec<FlatClause> = clauses.iter().map(|c| flatten(sig, c)).collect();
    let instances = flats.iter().fold(0usize, |acc, flat| {
        acc.saturating_add(flat.sorts.iter().fold(1usize, |n, s| n.saturating_mul(layout.sizes[s])))
    });
    if instances > max_clauses {
        return Grounding::TooLarge;
    }
    let mut solver = Solver::new(layout.num_vars);
    let mut count = 0usize;
    let mut emit = |solver: &mut Solver, lits: Vec<Lit>| {
        count += 1;
        solver.add_clause(lits);
        count <= max_clauses
    };

    for f in sig.functions() {
        let width = layout.sizes[&f.result];
        for vals in tuples(&layout, &f.args) {
            let all: Vec<Lit> = (0..width).map(|v| pos(layout.func_var(&f.name, &vals, v))).collect();
            if !emit(&mut solver, all) {
                return Grounding::TooLarge;
            }
            for v in 0..width {
                for w in v + 1..width {
                    let pair = vec![neg(layout.func_var(&f.name, &vals, v)), neg(layout.func_var(&f.name, &vals, w))];
                    if !emit(&mut solver, pair) {
                        return Grounding::TooLarge;
                    }
                }
            }
        }
    }

    // The i-th constant of a sort takes a value among 0..=i. Any model can
    // be renumbered so that constants take values in order of first use.
    let mut seen_per_sort: BTreeMap<Sort, usize> = BTreeMap::new();
    for f in sig.functions().filter(|f| f.is_constant()) {
        let i = seen_per_sort.entry(f.result.clone()).or_insert(0);
        for v in (*i + 1)..layout.sizes[&f.result] {
            if !emit(&mut solver, vec![neg(layout.func_var(&f.name, &[], v))]) {
                return Grounding::TooLarge;
            }
        }
        *i += 1;
    }

    for flat in &flats {
        let dims: Vec<usize> = flat.sorts.iter().map(|s| layout.sizes[s]).collect();
        let mut asg = vec![0usize; dims.len()];
        'assignments: loop {
            let mut lits = Vec::with_capacity(flat.lits.len());
            let mut satisfied = false;
            for l in &flat.lits {
                match l {
                    FlatLit::Eq { positive, a, b } => {
                        if (asg[*a] == asg[*b]) == *positive {
                            satisfied = true;
                            break;
                        }
                    }
                    FlatLit::Rel { positive, name, args } => {
                        let vals: Vec<usize> = args.iter().map(|&i| asg[i]).collect();
                        let v = layout.rel_var(name, &vals);
                        lits.push(if *positive { pos(v) } else { neg(v) });
                    }
                    FlatLit::Func { positive, name, args, result } => {
                        let vals: Vec<usize> = args.iter().map(|&i| asg[i]).collect();
                        let v = layout.func_var(name, &vals, asg[*result]);
                        lits.push(if *positive { pos(v) } else { neg(v) });
                    }
                }
            }
            if !satisfied && !emit(&mut solver, lits) {
                return Grounding::TooLarge;
            }
            for k in (0..asg.len()).rev() {
                asg[k] += 1;
                if asg[k] < dims[k] {
                    continue 'assignments;
                }
                asg[k] = 0;
            }
            break;
        }
    }
    Grounding::Ready(solver, layout)
}

fn tuples(layout: &Layout, sorts: &[Sort]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in sorts {
        let n = layout.sizes[s];
        out = out.into_iter().flat_map(|p: Vec<usize>| (0..n).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Reads the function and relation tables off a satisfying assignment.
pub(crate) fn decode(sig: &Signature, d: &DomainAssignment, layout: &Layout, values: &[bool]) -> FiniteInterpretation {
    let mut m = FiniteInterpretation::new(sig, d.clone());
    for f in sig.functions() {
        let width = layout.sizes[&f.result];
        for vals in tuples(layout, &f.args) {
            let v = (0..width).find(|&v| values[layout.func_var(&f.name, &vals, v)]).expect("totality clause");
            m.set_function(&f.name, &vals, v);
        }
    }
    for r in sig.relations() {
        for vals in tuples(layout, &r.args) {
            m.set_relation(&r.name, &vals, values[layout.rel_var(&r.name, &vals)]);
        }
    }
    m
}
