use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::logic::{Signature, Substitution, Term, Var};
use crate::parser::render_term;

/// Predicate name used for equality literals.
pub const EQUALS: &str = "=";

/// A possibly negated atom. Equality atoms use the predicate name `=`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub pred: Arc<str>,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, pred: impl Into<String>, args: Vec<Term>) -> Self {
        Literal { positive, pred: Arc::from(pred.into()), args }
    }

    pub fn eq(positive: bool, a: Term, b: Term) -> Self {
        Literal::new(positive, EQUALS, vec![a, b])
    }

    pub fn is_equality(&self) -> bool {
        &*self.pred == EQUALS
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn apply(&self, s: &Substitution) -> Literal {
        Literal { positive: self.positive, pred: self.pred.clone(), args: self.args.iter().map(|t| t.apply(s)).collect() }
    }

    pub fn complements(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.pred == other.pred && self.args == other.args
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    pub fn vars(&self, out: &mut Vec<Var>) {
        for t in &self.args {
            collect_ordered(t, out);
        }
    }
}

fn collect_ordered(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_ordered(a, out)),
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equality() {
            let op = if self.positive { "=" } else { "!=" };
            return write!(f, "{} {op} {}", render_term(&self.args[0]), render_term(&self.args[1]));
        }
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(render_term).collect();
            write!(f, "({})", args.join(", "))?;
        }
        Ok(())
    }
}

/// Where a clause came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    /// Produced by clausifying the named input formula, or an equality axiom.
    Input(String),
    /// Derived at the given step of a saturation run.
    Derived(usize),
}

/// A disjunction of literals; the empty clause is `$false`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub origin: Origin,
}

impl Clause {
    pub fn new(literals: Vec<Literal>, origin: Origin) -> Self {
        Clause { literals, origin }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn size(&self) -> usize {
        self.literals.iter().map(Literal::size).sum()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.vars(&mut out);
        }
        out
    }

    /// Contains a literal and its complement.
    pub fn is_tautology(&self) -> bool {
        self.literals.iter().enumerate().any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.complements(b)))
    }
}

/// Drops repeated literals, keeping first occurrences.
pub fn dedup_literals(lits: Vec<Literal>) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Renames variables to `X1`, `X2`, ... in order of first occurrence,
/// keeping sorts. Two clauses are variants iff their normal forms coincide.
pub fn normalize_vars(lits: &[Literal]) -> Vec<Literal> {
    normalize_owned(lits.to_vec())
}

pub(crate) fn normalize_owned(mut lits: Vec<Literal>) -> Vec<Literal> {
    let mut seen: Vec<(Var, String)> = Vec::new();
    rename_all(&mut lits, &mut |_, seen_len| format!("X{}", seen_len + 1), &mut seen);
    lits
}

/// Prefixes every variable name, keeping sorts. `:` cannot occur in source
/// identifiers, so tagged names never collide with user variables.
pub fn tag_vars(lits: &[Literal], tag: &str) -> Vec<Literal> {
    let mut lits = lits.to_vec();
    let mut seen: Vec<(Var, String)> = Vec::new();
    rename_all(&mut lits, &mut |v, _| format!("{tag}:{}", v.name), &mut seen);
    lits
}

/// Renames variables in place; `fresh` names a variable on first sight.
fn rename_all(lits: &mut [Literal], fresh: &mut impl FnMut(&Var, usize) -> String, seen: &mut Vec<(Var, String)>) {
    fn go(t: &mut Term, fresh: &mut impl FnMut(&Var, usize) -> String, seen: &mut Vec<(Var, String)>) {
        match t {
            Term::Var(v) => {
                let name = match seen.iter().find(|(w, _)| w == v) {
                    Some((_, n)) => n.clone(),
                    None => {
                        let n = fresh(v, seen.len());
                        seen.push((v.clone(), n.clone()));
                        n
                    }
                };
                v.name = name.into();
            }
            Term::App(_, args) => args.iter_mut().for_each(|a| go(a, fresh, seen)),
        }
    }
    for l in lits {
        for t in &mut l.args {
            go(t, fresh, seen);
        }
    }
}

pub fn render_literals(lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "$false".to_string();
    }
    lits.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_literals(&self.literals))
    }
}

/// One-sided matching: extends `s` so that `pattern.apply(s) == target`.
/// Bindings must respect sorts; equality positions carry no fixed sort.
/// On failure `s` may hold partial bindings; callers truncate.
pub(crate) fn match_term(sig: &Signature, pattern: &Term, target: &Term, s: &mut Vec<(Var, Term)>) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) => match s.iter().find(|(w, _)| w == v) {
            Some((_, bound)) => bound == target,
            None => {
                let sort_ok = match target {
                    Term::Var(w) => w.sort == v.sort,
                    Term::App(f, _) => sig.function(f).is_some_and(|d| d.result == v.sort),
                };
                if sort_ok {
                    s.push((v.clone(), target.clone()));
                }
                sort_ok
            }
        },
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(a, b)| match_term(sig, a, b, s))
        }
        _ => false,
    }
}

/// Bit set of (sign, predicate) pairs, a cheap necessary condition for subsumption.
pub(crate) fn literal_mask(lits: &[Literal]) -> u64 {
    let mut m = 0u64;
    for l in lits {
        let mut h: u64 = if l.positive { 0xcbf29ce484222325 } else { 0x84222325cbf29ce4 };
        for b in l.pred.bytes() {
            h = (h ^ u64::from(b)).wrapping_mul(0x100000001b3);
        }
        m |= 1 << (h % 64);
    }
    m
}

/// Clause subsumption: some substitution maps every literal of `c` into `d`.
pub(crate) fn subsumes(sig: &Signature, c: &[Literal], d: &[Literal]) -> bool {
    if c.len() > d.len() {
        return false;
    }
    fn go(sig: &Signature, c: &[Literal], d: &[Literal], s: &mut Vec<(Var, Term)>) -> bool {
        let Some((first, rest)) = c.split_first() else { return true };
        for cand in d {
            if cand.positive != first.positive || cand.pred != first.pred || cand.args.len() != first.args.len() {
                continue;
            }
            let mark = s.len();
            if first.args.iter().zip(&cand.args).all(|(a, b)| match_term(sig, a, b, s)) && go(sig, rest, d, s) {
                return true;
            }
            s.truncate(mark);
        }
        false
    }
    go(sig, c, d, &mut Vec::new())
}
