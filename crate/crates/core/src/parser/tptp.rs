//! TPTP first-order-form (`fof`) export.
//!
//! Sorts are compiled away by relativization: every sort `S` becomes a
//! unary guard predicate over a single universe, quantifiers are guarded,
//! and each guard is asserted nonempty and closed under the functions that
//! produce it. The exporter then mangles names to TPTP conventions
//! (lowercase symbols, uppercase variables) and records the table in
//! comments. [`check_tptp`] re-reads exported text and validates it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::logic::{
    substitute_unchecked, Connective, Formula, NamedFormula, Quantifier, Signature, Sort, Substitution, Term, Theory,
    Var,
};

/// Sort of the single universe after relativization.
pub const UNIVERSE: &str = "U";

/// Single-sorted image of a theory and goal.
#[derive(Clone, Debug)]
pub struct Relativized {
    pub theory: Theory,
    pub goal: Option<Formula>,
    /// Guard predicate for each original sort, in signature order.
    pub guards: Vec<(Sort, String)>,
}

impl Relativized {
    pub fn guard(&self, sort: &Sort) -> Option<&str> {
        self.guards.iter().find(|(s, _)| s == sort).map(|(_, g)| g.as_str())
    }
}

/// Relativizes `th` (and the optional closed `goal` over its signature) to
/// one sort.
///
/// Axioms that become alpha-equal to an earlier one are dropped, which does
/// not change the set of models.
pub fn relativize(th: &Theory, goal: Option<&Formula>) -> Relativized {
    let sig = th.signature();
    let u = Sort::new(UNIVERSE);
    let mut taken: BTreeSet<String> = sig.functions().map(|f| f.name.clone()).collect();
    taken.extend(sig.relations().map(|r| r.name.clone()));
    let mut guards = Vec::new();
    for s in sig.sorts() {
        let name = fresh_name(&format!("is{s}"), &taken);
        taken.insert(name.clone());
        guards.push((s.clone(), name));
    }
    let guard_of = |s: &Sort| -> String {
        guards.iter().find(|(g, _)| g == s).map(|(_, n)| n.clone()).expect("sort of the signature")
    };

    let mut out_sig = Signature::new();
    out_sig.add_sort(u.clone()).expect("fresh signature");
    for (_, g) in &guards {
        out_sig.add_relation(g.clone(), vec![u.clone()]).expect("fresh guard");
    }
    for f in sig.functions() {
        out_sig.add_function(f.name.clone(), vec![u.clone(); f.args.len()], u.clone()).expect("distinct symbols");
    }
    for r in sig.relations() {
        out_sig.add_relation(r.name.clone(), vec![u.clone(); r.args.len()]).expect("distinct symbols");
    }

    let mut axioms: Vec<NamedFormula> = Vec::new();
    let mut labels: BTreeSet<String> = BTreeSet::new();
    let mut push = |axioms: &mut Vec<NamedFormula>, label: String, formula: Formula| {
        let label = fresh_name(&label, &labels);
        labels.insert(label.clone());
        axioms.push(NamedFormula::new(label, formula));
    };
    for ax in th.axioms() {
        push(&mut axioms, ax.label.clone(), relativize_formula(&ax.formula, &guard_of));
    }
    for (s, g) in &guards {
        let x = Var::new("x", u.clone());
        push(&mut axioms, format!("nonempty_{s}"), Formula::exists(x.clone(), Formula::atom(g.clone(), vec![Term::Var(x)])));
    }
    for f in sig.functions() {
        let vars: Vec<Var> = (0..f.args.len()).map(|i| Var::new(format!("x{}", i + 1), u.clone())).collect();
        let result = Formula::atom(
            guard_of(&f.result),
            vec![Term::app(f.name.clone(), vars.iter().cloned().map(Term::Var).collect())],
        );
        let premises = vars.iter().zip(&f.args).map(|(v, s)| Formula::atom(guard_of(s), vec![Term::Var(v.clone())]));
        let body = match Formula::conjunction(premises) {
            Some(p) => Formula::implies(p, result),
            None => result,
        };
        push(&mut axioms, format!("closure_{}", f.name), Formula::forall_many(vars, body));
    }

    let mut kept = Vec::new();
    let mut seen = Vec::new();
    for ax in axioms {
        let c = crate::logic::canonicalize(&ax.formula);
        if !seen.contains(&c) {
            seen.push(c);
            kept.push(ax);
        }
    }
    let theory = Theory::new(format!("{}_rel", th.name()), out_sig, kept).expect("relativization preserves well-formedness");
    Relativized { theory, goal: goal.map(|g| relativize_formula(g, &guard_of)), guards }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (2..).map(|i| format!("{base}_{i}")).find(|n| !taken.contains(n)).expect("unbounded")
}

fn relativize_formula(f: &Formula, guard_of: &impl Fn(&Sort) -> String) -> Formula {
    let u = Sort::new(UNIVERSE);
    let mut names = f.all_var_names();
    let f = separate_binders(f, &mut Vec::new(), &mut names);
    let mut retype = Substitution::new();
    for v in bound_vars(&f) {
        retype.insert(v.clone(), Term::Var(Var::new(v.name.to_string(), u.clone())));
    }
    guard(&f, guard_of, &retype)
}

fn bound_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    f.visit_binders(&mut |v| {
        out.insert(v.clone());
    });
    out
}

/// Renames binders so that no two nested binders share a name; after
/// retyping to one sort, distinct variables must have distinct names.
fn separate_binders(f: &Formula, enclosing: &mut Vec<String>, names: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(separate_binders(g, enclosing, names)),
        Formula::Binary(c, a, b) => Formula::Binary(
            *c,
            Box::new(separate_binders(a, enclosing, names)),
            Box::new(separate_binders(b, enclosing, names)),
        ),
        Formula::Quant(q, v, body) => {
            let (v, body) = if enclosing.iter().any(|e| **e == *v.name) {
                let mut name = format!("{}'", v.name);
                while names.contains(&name) {
                    name.push('\'');
                }
                names.insert(name.clone());
                let fresh = Var::new(name, v.sort.clone());
                let mut s = Substitution::new();
                s.insert(v.clone(), Term::Var(fresh.clone()));
                (fresh, substitute_unchecked(body, &s))
            } else {
                (v.clone(), (**body).clone())
            };
            enclosing.push(v.name.to_string());
            let body = separate_binders(&body, enclosing, names);
            enclosing.pop();
            Formula::Quant(*q, v, Box::new(body))
        }
    }
}

fn guard(f: &Formula, guard_of: &impl Fn(&Sort) -> String, retype: &Substitution) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| t.apply(retype)).collect()),
        Formula::Eq(a, b) => Formula::eq(a.apply(retype), b.apply(retype)),
        Formula::Not(g) => Formula::not(guard(g, guard_of, retype)),
        Formula::Binary(c, a, b) => {
            Formula::Binary(*c, Box::new(guard(a, guard_of, retype)), Box::new(guard(b, guard_of, retype)))
        }
        Formula::Quant(q, v, body) => {
            let Term::Var(nv) = &retype[v] else { unreachable!("binders map to variables") };
            let g = Formula::atom(guard_of(&v.sort), vec![Term::Var(nv.clone())]);
            let body = guard(body, guard_of, retype);
            match q {
                Quantifier::Forall => Formula::forall(nv.clone(), Formula::implies(g, body)),
                Quantifier::Exists => Formula::exists(nv.clone(), Formula::and(g, body)),
            }
        }
    }
}

// ---- text output --------------------------------------------------------

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn symbol_base(name: &str) -> String {
    if is_lower_word(name) {
        return name.to_string();
    }
    let s = name.replace('\'', "_p").to_ascii_lowercase();
    if s.starts_with(|c: char| c.is_ascii_lowercase()) {
        s
    } else {
        format!("s{s}")
    }
}

fn variable_base(name: &str) -> String {
    let s = name.replace('\'', "_p");
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() => format!("{}{}", c.to_ascii_uppercase(), cs.as_str()),
        _ => format!("V{s}"),
    }
}

struct Mangler {
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
    order: Vec<String>,
}

impl Mangler {
    fn new() -> Self {
        Mangler { map: BTreeMap::new(), used: BTreeSet::new(), order: Vec::new() }
    }

    fn get(&mut self, name: &str, base: impl Fn(&str) -> String) -> String {
        if let Some(m) = self.map.get(name) {
            return m.clone();
        }
        let m = fresh_name(&base(name), &self.used);
        self.used.insert(m.clone());
        self.map.insert(name.to_string(), m.clone());
        self.order.push(name.to_string());
        m
    }
}

struct Writer {
    symbols: Mangler,
    vars: Mangler,
}

impl Writer {
    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.vars.get(&v.name, variable_base)),
            Term::App(f, args) => {
                out.push_str(&self.symbols.get(f, symbol_base));
                self.args(args, out);
            }
        }
    }

    fn args(&mut self, args: &[Term], out: &mut String) {
        if args.is_empty() {
            return;
        }
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.term(a, out);
        }
        out.push(')');
    }

    fn formula(&mut self, f: &Formula, out: &mut String) {
        match f {
            Formula::Atom(p, args) => {
                out.push_str(&self.symbols.get(p, symbol_base));
                self.args(args, out);
            }
            Formula::Eq(a, b) => {
                self.term(a, out);
                out.push_str(" = ");
                self.term(b, out);
            }
            Formula::Not(g) => match &**g {
                Formula::Eq(a, b) => {
                    self.term(a, out);
                    out.push_str(" != ");
                    self.term(b, out);
                }
                _ => {
                    out.push_str("~ ");
                    self.unitary(g, out);
                }
            },
            Formula::Binary(c, a, b) => {
                let op = match c {
                    Connective::And => " & ",
                    Connective::Or => " | ",
                    Connective::Implies => " => ",
                    Connective::Iff => " <=> ",
                };
                out.push('(');
                self.unitary(a, out);
                out.push_str(op);
                self.unitary(b, out);
                out.push(')');
            }
            Formula::Quant(q, v, body) => {
                out.push_str(match q {
                    Quantifier::Forall => "! [",
                    Quantifier::Exists => "? [",
                });
                out.push_str(&self.vars.get(&v.name, variable_base));
                let mut body = &**body;
                while let Formula::Quant(q2, v2, inner) = body {
                    if q2 != q {
                        break;
                    }
                    out.push(',');
                    out.push_str(&self.vars.get(&v2.name, variable_base));
                    body = inner;
                }
                out.push_str("] : ");
                self.unitary(body, out);
            }
        }
    }

    /// Equalities are wrapped so they can stand as operands of binary connectives.
    fn unitary(&mut self, f: &Formula, out: &mut String) {
        let wrap = match f {
            Formula::Eq(..) => true,
            Formula::Not(g) => matches!(**g, Formula::Eq(..)),
            _ => false,
        };
        if wrap {
            out.push('(');
        }
        self.formula(f, out);
        if wrap {
            out.push(')');
        }
    }
}

/// Exports `th` (and an optional conjecture) as a TPTP `fof` problem.
pub fn export_tptp(th: &Theory, goal: Option<&Formula>) -> String {
    let rel = relativize(th, goal);
    let mut w = Writer { symbols: Mangler::new(), vars: Mangler::new() };
    // Symbols are mangled in signature order so the table is stable.
    for r in rel.theory.signature().relations() {
        w.symbols.get(&r.name, symbol_base);
    }
    for f in rel.theory.signature().functions() {
        w.symbols.get(&f.name, symbol_base);
    }
    let mut names = Mangler::new();
    let mut body = String::new();
    for ax in rel.theory.axioms() {
        let name = names.get(&ax.label, symbol_base);
        let mut text = String::new();
        w.formula(&ax.formula, &mut text);
        let _ = writeln!(body, "fof({name}, axiom, {text}).");
    }
    if let Some(g) = &rel.goal {
        let name = names.get("goal", symbol_base);
        let mut text = String::new();
        w.formula(g, &mut text);
        let _ = writeln!(body, "fof({name}, conjecture, {text}).");
    }

    let mut out = String::new();
    let _ = writeln!(out, "% theory {}, axiom count {}{}", th.name(), th.len(), if goal.is_some() { ", with conjecture" } else { "" });
    let _ = writeln!(out, "% sorts relativized to guard predicates over one universe");
    for (s, g) in &rel.guards {
        let _ = writeln!(out, "%   sort {s} -> {}", w.symbols.map[g]);
    }
    let tables = [("symbol", &w.symbols), ("variable", &w.vars), ("label", &names)];
    for (kind, m) in tables {
        for n in &m.order {
            if &m.map[n] != n {
                let _ = writeln!(out, "%   {kind} {n} -> {}", m.map[n]);
            }
        }
    }
    out.push_str(&body);
    out
}

// ---- well-formedness check ------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("annotated formula `{0}` defined twice")]
    DuplicateName(String),
    #[error("in `{name}`: variable `{var}` is not bound")]
    FreeVariable { name: String, var: String },
    #[error("symbol `{symbol}` used inconsistently ({first} vs {second})")]
    InconsistentSymbol { symbol: String, first: String, second: String },
}

/// Counts reported by [`check_tptp`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TptpSummary {
    pub axioms: usize,
    pub conjectures: usize,
    pub symbols: BTreeMap<String, (SymbolKind, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolKind {
    Predicate,
    Function,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TTok {
    Lower(String),
    Upper(String),
    Punct(&'static str),
}

const PUNCT: &[&str] = &["<=>", "=>", "!=", "(", ")", "[", "]", ",", ":", ".", "!", "?", "~", "&", "|", "="];

fn tptp_tokens(text: &str) -> Result<Vec<(TTok, usize)>, TptpError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match line.find('%') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut rest = line;
        while let Some(c) = rest.chars().next() {
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            if c.is_ascii_alphanumeric() {
                let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
                let word = rest[..end].to_string();
                out.push((if c.is_ascii_uppercase() { TTok::Upper(word) } else { TTok::Lower(word) }, line_no));
                rest = &rest[end..];
                continue;
            }
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    out.push((TTok::Punct(p), line_no));
                    rest = &rest[p.len()..];
                }
                None => {
                    return Err(TptpError::Syntax { line: line_no, message: format!("unexpected character `{c}`") })
                }
            }
        }
    }
    Ok(out)
}

struct Checker {
    toks: Vec<(TTok, usize)>,
    pos: usize,
    bound: Vec<String>,
    symbols: BTreeMap<String, (SymbolKind, usize)>,
    current: String,
}

impl Checker {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map(|t| t.1).unwrap_or(1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TptpError> {
        Err(TptpError::Syntax { line: self.line(), message: message.into() })
    }

    fn peek(&self) -> Option<&TTok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn at(&self, p: &str) -> bool {
        matches!(self.peek(), Some(TTok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), TptpError> {
        if self.at(p) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn lower(&mut self) -> Result<String, TptpError> {
        match self.peek().cloned() {
            Some(TTok::Lower(w)) if w.starts_with(|c: char| c.is_ascii_lowercase()) => {
                self.pos += 1;
                Ok(w)
            }
            _ => self.err("expected a lower word"),
        }
    }

    fn symbol(&mut self, name: &str, kind: SymbolKind, arity: usize) -> Result<(), TptpError> {
        match self.symbols.get(name) {
            Some(&(k, a)) if (k, a) != (kind, arity) => Err(TptpError::InconsistentSymbol {
                symbol: name.to_string(),
                first: format!("{k:?}/{a}"),
                second: format!("{kind:?}/{arity}"),
            }),
            _ => {
                self.symbols.insert(name.to_string(), (kind, arity));
                Ok(())
            }
        }
    }

    fn formula(&mut self) -> Result<(), TptpError> {
        self.unitary()?;
        for op in ["<=>", "=>"] {
            if self.at(op) {
                self.pos += 1;
                return self.unitary();
            }
        }
        for op in ["&", "|"] {
            if self.at(op) {
                while self.at(op) {
                    self.pos += 1;
                    self.unitary()?;
                }
                return Ok(());
            }
        }
        Ok(())
    }

    fn unitary(&mut self) -> Result<(), TptpError> {
        if self.at("(") {
            self.pos += 1;
            self.formula()?;
            return self.expect(")");
        }
        if self.at("~") {
            self.pos += 1;
            return self.unitary();
        }
        if self.at("!") || self.at("?") {
            self.pos += 1;
            self.expect("[")?;
            let depth = self.bound.len();
            loop {
                match self.peek().cloned() {
                    Some(TTok::Upper(v)) => {
                        self.pos += 1;
                        self.bound.push(v);
                    }
                    _ => return self.err("expected a variable"),
                }
                if self.at(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect("]")?;
            self.expect(":")?;
            let r = self.unitary();
            self.bound.truncate(depth);
            return r;
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<(), TptpError> {
        let start = self.pos;
        // A lower word not followed by `=`/`!=` after its arguments is a predicate.
        if let Some(TTok::Lower(_)) = self.peek() {
            let name = self.lower()?;
            let arity = self.arguments()?;
            if !(self.at("=") || self.at("!=")) {
                return self.symbol(&name, SymbolKind::Predicate, arity);
            }
            self.pos = start;
        }
        self.term()?;
        if self.at("=") || self.at("!=") {
            self.pos += 1;
            self.term()
        } else {
            self.err("expected `=` or `!=`")
        }
    }

    fn arguments(&mut self) -> Result<usize, TptpError> {
        if !self.at("(") {
            return Ok(0);
        }
        self.pos += 1;
        let mut n = 0;
        loop {
            self.term()?;
            n += 1;
            if self.at(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(")")?;
        Ok(n)
    }

    fn term(&mut self) -> Result<(), TptpError> {
        match self.peek().cloned() {
            Some(TTok::Upper(v)) => {
                self.pos += 1;
                if !self.bound.contains(&v) {
                    return Err(TptpError::FreeVariable { name: self.current.clone(), var: v });
                }
                Ok(())
            }
            Some(TTok::Lower(_)) => {
                let name = self.lower()?;
                let arity = self.arguments()?;
                self.symbol(&name, SymbolKind::Function, arity)
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Checks that `text` is a well-formed closed `fof` problem with
/// consistently used symbols.
pub fn check_tptp(text: &str) -> Result<TptpSummary, TptpError> {
    let mut c = Checker { toks: tptp_tokens(text)?, pos: 0, bound: Vec::new(), symbols: BTreeMap::new(), current: String::new() };
    let mut names = BTreeSet::new();
    let mut summary = TptpSummary::default();
    while c.peek().is_some() {
        match c.peek() {
            Some(TTok::Lower(w)) if w == "fof" => c.pos += 1,
            _ => return c.err("expected `fof`"),
        }
        c.expect("(")?;
        let name = match c.peek().cloned() {
            Some(TTok::Lower(w)) => {
                c.pos += 1;
                w
            }
            _ => return c.err("expected a formula name"),
        };
        if !names.insert(name.clone()) {
            return Err(TptpError::DuplicateName(name));
        }
        c.current = name;
        c.expect(",")?;
        let role = c.lower()?;
        match role.as_str() {
            "axiom" | "hypothesis" | "definition" | "lemma" | "theorem" => summary.axioms += 1,
            "conjecture" | "negated_conjecture" => summary.conjectures += 1,
            other => return c.err(format!("unknown role `{other}`")),
        }
        c.expect(",")?;
        c.formula()?;
        c.expect(")")?;
        c.expect(".")?;
    }
    summary.symbols = c.symbols;
    Ok(summary)
}
