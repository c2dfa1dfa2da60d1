//! Clause normal form: NNF, Skolemization, CNF with definitional naming of
//! large disjunctive subformulas, and the equality axioms.

use std::collections::BTreeSet;

use crate::logic::{Connective, Formula, NamedFormula, Quantifier, Signature, Sort, Substitution, Term, Var};

use super::clause::{dedup_literals, normalize_vars, Clause, Literal, Origin};

#[derive(Clone, Copy, Debug)]
pub struct ClausifyOptions {
    /// Append reflexivity, symmetry, transitivity and congruence clauses
    /// when some input mentions equality.
    pub equality_axioms: bool,
    /// Distribution producing more clauses than this names the disjunct instead.
    pub max_product: usize,
}

impl Default for ClausifyOptions {
    fn default() -> Self {
        ClausifyOptions { equality_axioms: true, max_product: 32 }
    }
}

/// Clauses plus the signature extended with Skolem functions and
/// definition predicates.
#[derive(Clone, Debug)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
    pub signature: Signature,
}

/// Clausifies one closed formula over `sig`.
pub fn clausify(sig: &Signature, f: &Formula) -> ClauseSet {
    clausify_all(sig, &[NamedFormula::new("input", f.clone())], ClausifyOptions::default())
}

/// Clausifies named closed formulas; each clause records its input label.
pub fn clausify_all(sig: &Signature, inputs: &[NamedFormula], opts: ClausifyOptions) -> ClauseSet {
    let mut cx = Cx { sig: sig.clone(), counter: 0, symbols: 0, opts };
    let mut clauses = Vec::new();
    for input in inputs {
        let nnf = nnf(&input.formula, true);
        let ground = cx.skolemize(&nnf, &mut Vec::new(), &Substitution::new());
        let mut defs = Vec::new();
        let cnf = cx.cnf(&ground, &mut defs);
        for lits in cnf.into_iter().chain(defs) {
            push_clause(&mut clauses, lits, &input.label);
        }
    }
    if opts.equality_axioms && inputs.iter().any(|i| i.formula.mentions_equality()) {
        for (label, lits) in equality_axioms(&cx.sig) {
            push_clause(&mut clauses, lits, &label);
        }
    }
    ClauseSet { clauses, signature: cx.sig }
}

fn push_clause(out: &mut Vec<Clause>, lits: Vec<Literal>, label: &str) {
    let lits = normalize_vars(&dedup_literals(lits));
    let c = Clause::new(lits, Origin::Input(label.to_string()));
    if !c.is_tautology() && !out.iter().any(|d| d.literals == c.literals) {
        out.push(c);
    }
}

#[derive(Clone, Debug)]
enum Nnf {
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(Var, Box<Nnf>),
    Exists(Var, Box<Nnf>),
}

fn nnf(f: &Formula, pos: bool) -> Nnf {
    match f {
        Formula::Atom(p, args) => Nnf::Lit(Literal::new(pos, p.clone(), args.clone())),
        Formula::Eq(a, b) => Nnf::Lit(Literal::eq(pos, a.clone(), b.clone())),
        Formula::Not(g) => nnf(g, !pos),
        Formula::Binary(c, a, b) => match (c, pos) {
            (Connective::And, true) => Nnf::And(vec![nnf(a, true), nnf(b, true)]),
            (Connective::And, false) => Nnf::Or(vec![nnf(a, false), nnf(b, false)]),
            (Connective::Or, true) => Nnf::Or(vec![nnf(a, true), nnf(b, true)]),
            (Connective::Or, false) => Nnf::And(vec![nnf(a, false), nnf(b, false)]),
            (Connective::Implies, true) => Nnf::Or(vec![nnf(a, false), nnf(b, true)]),
            (Connective::Implies, false) => Nnf::And(vec![nnf(a, true), nnf(b, false)]),
            (Connective::Iff, true) => Nnf::And(vec![
                Nnf::Or(vec![nnf(a, false), nnf(b, true)]),
                Nnf::Or(vec![nnf(a, true), nnf(b, false)]),
            ]),
            (Connective::Iff, false) => Nnf::Or(vec![
                Nnf::And(vec![nnf(a, true), nnf(b, false)]),
                Nnf::And(vec![nnf(a, false), nnf(b, true)]),
            ]),
        },
        Formula::Quant(q, v, body) => {
            let body = Box::new(nnf(body, pos));
            match (q, pos) {
                (Quantifier::Forall, true) | (Quantifier::Exists, false) => Nnf::Forall(v.clone(), body),
                _ => Nnf::Exists(v.clone(), body),
            }
        }
    }
}

fn nnf_free(f: &Nnf, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Nnf::Lit(l) => {
            for t in &l.args {
                for v in t.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
        }
        Nnf::And(fs) | Nnf::Or(fs) => fs.iter().for_each(|g| nnf_free(g, bound, out)),
        Nnf::Forall(v, b) | Nnf::Exists(v, b) => {
            bound.push(v.clone());
            nnf_free(b, bound, out);
            bound.pop();
        }
    }
}

struct Cx {
    sig: Signature,
    counter: usize,
    symbols: usize,
    opts: ClausifyOptions,
}

impl Cx {
    fn fresh_symbol(&mut self, base: &str) -> String {
        loop {
            let name = format!("{base}{}", self.symbols);
            self.symbols += 1;
            if !self.sig.has_symbol(&name) {
                return name;
            }
        }
    }

    /// Removes quantifiers: universal variables get unique names (`#` does
    /// not occur in source identifiers), existentials become Skolem terms
    /// over the universals they depend on.
    fn skolemize(&mut self, f: &Nnf, universals: &mut Vec<Var>, s: &Substitution) -> Nnf {
        match f {
            Nnf::Lit(l) => Nnf::Lit(l.apply(s)),
            Nnf::And(fs) => Nnf::And(fs.iter().map(|g| self.skolemize(g, universals, s)).collect()),
            Nnf::Or(fs) => Nnf::Or(fs.iter().map(|g| self.skolemize(g, universals, s)).collect()),
            Nnf::Forall(v, body) => {
                self.counter += 1;
                let fresh = Var::new(format!("{}#{}", v.name, self.counter), v.sort.clone());
                let mut s2 = s.clone();
                s2.insert(v.clone(), Term::Var(fresh.clone()));
                universals.push(fresh);
                let out = self.skolemize(body, universals, &s2);
                universals.pop();
                out
            }
            Nnf::Exists(v, body) => {
                let mut free = BTreeSet::new();
                nnf_free(f, &mut Vec::new(), &mut free);
                let mut deps = BTreeSet::new();
                for w in &free {
                    if let Some(t) = s.get(w) {
                        deps.extend(t.vars());
                    }
                }
                let args: Vec<Var> = universals.iter().filter(|u| deps.contains(*u)).cloned().collect();
                let name = self.fresh_symbol("sk");
                self.sig
                    .add_function(name.clone(), args.iter().map(|a| a.sort.clone()).collect(), v.sort.clone())
                    .expect("fresh Skolem symbol");
                let mut s2 = s.clone();
                s2.insert(v.clone(), Term::app(name, args.into_iter().map(Term::Var).collect()));
                self.skolemize(body, universals, &s2)
            }
        }
    }

    fn cnf(&mut self, f: &Nnf, defs: &mut Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
        match f {
            Nnf::Lit(l) => vec![vec![l.clone()]],
            Nnf::And(fs) => fs.iter().flat_map(|g| self.cnf(g, defs)).collect(),
            Nnf::Or(fs) => {
                let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
                for g in fs {
                    let mut part = self.cnf(g, defs);
                    if part.len() > 1 && acc.len() * part.len() > self.opts.max_product {
                        part = vec![vec![self.define(g, part, defs)]];
                    }
                    acc = acc
                        .iter()
                        .flat_map(|a| part.iter().map(move |p| a.iter().chain(p).cloned().collect::<Vec<_>>()))
                        .collect();
                }
                acc
            }
            Nnf::Forall(..) | Nnf::Exists(..) => unreachable!("quantifiers removed before CNF"),
        }
    }

    /// Names a subformula occurring positively: `d(v) -> g` suffices.
    fn define(&mut self, g: &Nnf, cnf: Vec<Vec<Literal>>, defs: &mut Vec<Vec<Literal>>) -> Literal {
        let mut free = BTreeSet::new();
        nnf_free(g, &mut Vec::new(), &mut free);
        let vars: Vec<Var> = free.into_iter().collect();
        let name = self.fresh_symbol("def");
        self.sig.add_relation(name.clone(), vars.iter().map(|v| v.sort.clone()).collect()).expect("fresh definition symbol");
        let head = Literal::new(true, name, vars.into_iter().map(Term::Var).collect());
        for mut c in cnf {
            c.insert(0, head.negated());
            defs.push(c);
        }
        head
    }
}

fn xs(sort: &Sort, n: usize, base: &str) -> Vec<Term> {
    (1..=n).map(|i| Term::var(format!("{base}{i}"), sort.clone())).collect()
}

/// Reflexivity, symmetry, transitivity per sort; one congruence clause per
/// argument position of every function and relation.
pub fn equality_axioms(sig: &Signature) -> Vec<(String, Vec<Literal>)> {
    let mut out = Vec::new();
    for s in sig.sorts() {
        let v = xs(s, 3, "x");
        out.push((format!("eq_refl_{s}"), vec![Literal::eq(true, v[0].clone(), v[0].clone())]));
        out.push((
            format!("eq_sym_{s}"),
            vec![Literal::eq(false, v[0].clone(), v[1].clone()), Literal::eq(true, v[1].clone(), v[0].clone())],
        ));
        out.push((
            format!("eq_trans_{s}"),
            vec![
                Literal::eq(false, v[0].clone(), v[1].clone()),
                Literal::eq(false, v[1].clone(), v[2].clone()),
                Literal::eq(true, v[0].clone(), v[2].clone()),
            ],
        ));
    }
    let position_vars = |args: &[Sort], i: usize| -> (Vec<Term>, Vec<Term>, Literal) {
        let left: Vec<Term> = args.iter().enumerate().map(|(k, s)| Term::var(format!("x{}", k + 1), s.clone())).collect();
        let mut right = left.clone();
        right[i] = Term::var("y", args[i].clone());
        let premise = Literal::eq(false, left[i].clone(), right[i].clone());
        (left, right, premise)
    };
    for f in sig.functions() {
        for i in 0..f.args.len() {
            let (l, r, premise) = position_vars(&f.args, i);
            let concl = Literal::eq(true, Term::app(f.name.clone(), l), Term::app(f.name.clone(), r));
            out.push((format!("eq_cong_{}_{}", f.name, i + 1), vec![premise, concl]));
        }
    }
    for p in sig.relations() {
        for i in 0..p.args.len() {
            let (l, r, premise) = position_vars(&p.args, i);
            out.push((
                format!("eq_cong_{}_{}", p.name, i + 1),
                vec![premise, Literal::new(false, p.name.clone(), l), Literal::new(true, p.name.clone(), r)],
            ));
        }
    }
    out
}
