use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::logic::{substitute_unchecked, Connective, Formula, Quantifier, Signature, Substitution, Term, Theory, Var};

use super::grammar::is_keyword;
use super::{ADD, LT, MUL};

const QUANT: u8 = 0;
const NOT: u8 = 5;
const ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => QUANT,
        Formula::Binary(Connective::Iff, ..) => 1,
        Formula::Binary(Connective::Implies, ..) => 2,
        Formula::Binary(Connective::Or, ..) => 3,
        Formula::Binary(Connective::And, ..) => 4,
        Formula::Not(g) if matches!(**g, Formula::Eq(..)) => ATOM,
        Formula::Not(_) => NOT,
        Formula::Atom(..) | Formula::Eq(..) => ATOM,
    }
}

/// Renders a formula in `.why` syntax with minimal parentheses.
///
/// Bound variables whose names would be ambiguous when re-read (clashing
/// with a symbol, a keyword, an enclosing binder or a free variable) are
/// primed first, so the output parses back to an alpha-equal formula.
pub fn render(f: &Formula) -> String {
    let f = disambiguate(f);
    let mut out = String::new();
    write_formula(&f, 0, true, &mut out);
    out
}

pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, 0, &mut out);
    out
}

fn disambiguate(f: &Formula) -> Formula {
    let mut reserved: BTreeSet<String> = f.function_names();
    reserved.extend(f.relation_names());
    reserved.extend(f.free_vars().into_iter().map(|v| v.name.to_string()));
    let mut all = f.all_var_names();
    all.extend(reserved.iter().cloned());
    rename_binders(f, &reserved, &mut Vec::new(), &mut all)
}

fn rename_binders(f: &Formula, reserved: &BTreeSet<String>, enclosing: &mut Vec<String>, all: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(rename_binders(g, reserved, enclosing, all)),
        Formula::Binary(c, a, b) => Formula::Binary(
            *c,
            Box::new(rename_binders(a, reserved, enclosing, all)),
            Box::new(rename_binders(b, reserved, enclosing, all)),
        ),
        Formula::Quant(q, v, body) => {
            let clash = reserved.contains(&*v.name) || enclosing.iter().any(|e| **e == *v.name) || is_keyword(&v.name);
            let (v, body) = if clash {
                let mut name = format!("{}'", v.name);
                while all.contains(&name) || is_keyword(&name) {
                    name.push('\'');
                }
                all.insert(name.clone());
                let fresh = Var::new(name, v.sort.clone());
                let mut s = Substitution::new();
                s.insert(v.clone(), Term::Var(fresh.clone()));
                (fresh, substitute_unchecked(body, &s))
            } else {
                (v.clone(), (**body).clone())
            };
            enclosing.push(v.name.to_string());
            let body = rename_binders(&body, reserved, enclosing, all);
            enclosing.pop();
            Formula::Quant(*q, v, Box::new(body))
        }
    }
}

fn write_formula(f: &Formula, min: u8, tail: bool, out: &mut String) {
    let prec = precedence(f);
    let parens = if prec == QUANT { !tail } else { prec < min };
    let tail = tail || parens;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Atom(p, args) if p == LT && args.len() == 2 => {
            write_term(&args[0], 0, out);
            out.push_str(" < ");
            write_term(&args[1], 0, out);
        }
        Formula::Atom(p, args) => {
            out.push_str(p);
            write_args(args, out);
        }
        Formula::Eq(a, b) => {
            write_term(a, 0, out);
            out.push_str(" = ");
            write_term(b, 0, out);
        }
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => {
                write_term(a, 0, out);
                out.push_str(" != ");
                write_term(b, 0, out);
            }
            _ => {
                out.push('~');
                write_formula(g, NOT, tail, out);
            }
        },
        Formula::Binary(c, a, b) => {
            let (lmin, rmin, op) = match c {
                Connective::Iff => (1, 2, " <-> "),
                Connective::Implies => (3, 2, " -> "),
                Connective::Or => (3, 4, " | "),
                Connective::And => (4, 5, " & "),
            };
            write_formula(a, lmin, false, out);
            out.push_str(op);
            write_formula(b, rmin, tail, out);
        }
        Formula::Quant(q, v, body) => {
            out.push_str(match q {
                Quantifier::Forall => "forall ",
                Quantifier::Exists => "exists ",
            });
            let _ = write!(out, "{}:{}", v.name, v.sort);
            let mut body = &**body;
            while let Formula::Quant(q2, v2, inner) = body {
                if q2 != q {
                    break;
                }
                let _ = write!(out, ", {}:{}", v2.name, v2.sort);
                body = inner;
            }
            out.push_str(". ");
            write_formula(body, 0, true, out);
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_args(args: &[Term], out: &mut String) {
    if args.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(a, 0, out);
    }
    out.push(')');
}

fn write_term(t: &Term, min: u8, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&v.name),
        Term::App(f, args) if args.len() == 2 && (&**f == ADD || &**f == MUL) => {
            let (level, op) = if &**f == ADD { (1, " + ") } else { (2, " * ") };
            let parens = level < min;
            if parens {
                out.push('(');
            }
            write_term(&args[0], level, out);
            out.push_str(op);
            write_term(&args[1], level + 1, out);
            if parens {
                out.push(')');
            }
        }
        Term::App(f, args) => {
            out.push_str(f);
            write_args(args, out);
        }
    }
}

/// Declarations block of a theory file, one declaration per line.
pub fn render_signature(sig: &Signature) -> String {
    let mut out = String::new();
    if !sig.sorts().is_empty() {
        let names: Vec<&str> = sig.sorts().iter().map(|s| s.name()).collect();
        let _ = writeln!(out, "  sorts {};", names.join(", "));
    }
    for f in sig.functions() {
        if f.args.is_empty() {
            let _ = writeln!(out, "  const {}: {};", f.name, f.result);
        } else {
            let args: Vec<&str> = f.args.iter().map(|s| s.name()).collect();
            let _ = writeln!(out, "  func {}: {} -> {};", f.name, args.join(" x "), f.result);
        }
    }
    for p in sig.relations() {
        if p.args.is_empty() {
            let _ = writeln!(out, "  pred {};", p.name);
        } else {
            let args: Vec<&str> = p.args.iter().map(|s| s.name()).collect();
            let _ = writeln!(out, "  pred {}: {};", p.name, args.join(" x "));
        }
    }
    out
}

/// A complete `.why` file for the theory.
pub fn render_theory(th: &Theory) -> String {
    let mut out = format!("theory {} {{\n", th.name());
    out.push_str(&render_signature(th.signature()));
    for ax in th.axioms() {
        let _ = writeln!(out, "  axiom {}: {};", ax.label, render(&ax.formula));
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}
