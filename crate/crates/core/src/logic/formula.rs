use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::signature::{Signature, Sort};

/// A sorted variable. Two variables are the same only if name and sort agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<Sort>) -> Self {
        Var { name: Arc::from(name.into()), sort: sort.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(Var),
    App(Arc<str>, Vec<Term>),
}

/// Variable-to-term binding used by substitution and unification.
pub type Substitution = BTreeMap<Var, Term>;

impl Term {
    pub fn var(name: impl Into<String>, sort: impl Into<Sort>) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(Arc::from(name.into()), args)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(Arc::from(name.into()), Vec::new())
    }

    /// Result sort, if the head symbol is known. Does not check arguments.
    pub fn sort_in(&self, sig: &Signature) -> Option<Sort> {
        match self {
            Term::Var(v) => Some(v.sort.clone()),
            Term::App(f, _) => sig.function(f).map(|d| d.result.clone()),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Simultaneous substitution on a term. No binders, so no capture.
    pub fn apply(&self, subst: &Substitution) -> Term {
        match self {
            Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(subst)).collect()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            out.insert(f.to_string());
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(name.into(), args)
    }

    /// A 0-ary relation atom, used for propositional fragments.
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::Binary(Connective::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Binary(Connective::Or, Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Binary(Connective::Implies, Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Binary(Connective::Iff, Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v, Box::new(body))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn forall_many(vars: impl IntoIterator<Item = Var>, body: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let add_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Binary(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            for v in t.vars() {
                out.insert(v.name.to_string());
            }
        });
        self.visit_binders(&mut |v| {
            out.insert(v.name.to_string());
        });
        out
    }

    pub fn function_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_functions(&mut out));
        out
    }

    pub fn relation_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn mentions_equality(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Eq(..)));
        found
    }

    /// Pre-order visit of every subformula.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::Eq(..) => {}
            Formula::Not(g) | Formula::Quant(_, _, g) => g.visit(f),
            Formula::Binary(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Visits the top-level terms of every atom.
    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |g| match g {
            Formula::Atom(_, args) => args.iter().for_each(&mut *f),
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            _ => {}
        });
    }

    pub fn visit_binders(&self, f: &mut impl FnMut(&Var)) {
        self.visit(&mut |g| {
            if let Formula::Quant(_, v, _) = g {
                f(v)
            }
        });
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(g) | Formula::Quant(_, _, g) => 1 + g.size(),
            Formula::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Formula paired with the label it carries inside a theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NamedFormula {
    pub label: String,
    pub formula: Formula,
}

impl NamedFormula {
    pub fn new(label: impl Into<String>, formula: Formula) -> Self {
        NamedFormula { label: label.into(), formula }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_respect_binders() {
        let x = Var::new("x", "Q");
        let y = Var::new("y", "Q");
        let f = Formula::forall(
            x.clone(),
            Formula::atom("R", vec![Term::Var(x.clone()), Term::Var(y.clone())]),
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![y]);
        assert!(!f.is_closed());
    }

    #[test]
    fn same_name_different_sort_are_distinct_vars() {
        let xq = Var::new("x", "Q");
        let xb = Var::new("x", "B");
        let f = Formula::forall(xq, Formula::atom("P", vec![Term::Var(xb.clone())]));
        assert!(f.free_vars().contains(&xb));
    }
}
