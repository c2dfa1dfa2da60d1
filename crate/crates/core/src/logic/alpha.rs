//! Binder-aware operations: capture-avoiding substitution, alpha-equivalence
//! and canonical renaming of bound variables.

use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::{Formula, Substitution, Term, Var};
use super::signature::{Signature, Sort};
use super::sorting::term_sort;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("cannot bind `{var}` of sort `{expected}` to a term of sort `{found}`")]
    SortMismatch { var: String, expected: Sort, found: Sort },
    #[error("binding for `{var}` is not well-sorted: {detail}")]
    IllSortedTerm { var: String, detail: String },
}

/// Capture-avoiding simultaneous substitution of free variables.
///
/// Bound variables whose name clashes with a variable of the substituted
/// terms are renamed by appending primes.
pub fn substitute(sig: &Signature, f: &Formula, binding: &Substitution) -> Result<Formula, SubstitutionError> {
    for (var, term) in binding {
        let found = term_sort(sig, term).map_err(|diags| SubstitutionError::IllSortedTerm {
            var: var.name.to_string(),
            detail: diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        })?;
        if found != var.sort {
            return Err(SubstitutionError::SortMismatch {
                var: var.name.to_string(),
                expected: var.sort.clone(),
                found,
            });
        }
    }
    Ok(substitute_unchecked(f, binding))
}

/// [`substitute`] without the sort check on the binding.
pub fn substitute_unchecked(f: &Formula, binding: &Substitution) -> Formula {
    if binding.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| t.apply(binding)).collect()),
        Formula::Eq(a, b) => Formula::Eq(a.apply(binding), b.apply(binding)),
        Formula::Not(g) => Formula::not(substitute_unchecked(g, binding)),
        Formula::Binary(c, a, b) => Formula::Binary(
            *c,
            Box::new(substitute_unchecked(a, binding)),
            Box::new(substitute_unchecked(b, binding)),
        ),
        Formula::Quant(q, v, body) => {
            let free = body.free_vars();
            let relevant: Substitution = binding
                .iter()
                .filter(|(k, _)| *k != v && free.contains(*k))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            if relevant.is_empty() {
                return f.clone();
            }
            let range_names: BTreeSet<String> = relevant
                .values()
                .flat_map(|t| t.vars())
                .map(|w| w.name.to_string())
                .collect();
            if !range_names.contains(&*v.name) {
                return Formula::Quant(*q, v.clone(), Box::new(substitute_unchecked(body, &relevant)));
            }
            let mut avoid = range_names;
            avoid.extend(body.all_var_names());
            let mut name = format!("{}'", v.name);
            while avoid.contains(&name) {
                name.push('\'');
            }
            let fresh = Var { name: name.into(), sort: v.sort.clone() };
            let mut renamed = relevant;
            renamed.insert(v.clone(), Term::Var(fresh.clone()));
            Formula::Quant(*q, fresh, Box::new(substitute_unchecked(body, &renamed)))
        }
    }
}

/// True iff the formulas differ only in the names of bound variables.
pub fn alpha_equal(f1: &Formula, f2: &Formula) -> bool {
    alpha_eq(f1, f2, &mut Vec::new(), &mut Vec::new())
}

fn lookup(env: &[Var], v: &Var) -> Option<usize> {
    env.iter().rposition(|w| w == v)
}

fn term_alpha_eq(a: &Term, b: &Term, ea: &[Var], eb: &[Var]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (lookup(ea, x), lookup(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, ea, eb))
        }
        _ => false,
    }
}

fn alpha_eq(a: &Formula, b: &Formula, ea: &mut Vec<Var>, eb: &mut Vec<Var>) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, ea, eb))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            term_alpha_eq(a1, b1, ea, eb) && term_alpha_eq(a2, b2, ea, eb)
        }
        (Formula::Not(x), Formula::Not(y)) => alpha_eq(x, y, ea, eb),
        (Formula::Binary(c, a1, a2), Formula::Binary(d, b1, b2)) => {
            c == d && alpha_eq(a1, b1, ea, eb) && alpha_eq(a2, b2, ea, eb)
        }
        (Formula::Quant(q, v, x), Formula::Quant(r, w, y)) => {
            if q != r || v.sort != w.sort {
                return false;
            }
            ea.push(v.clone());
            eb.push(w.clone());
            let out = alpha_eq(x, y, ea, eb);
            ea.pop();
            eb.pop();
            out
        }
        _ => false,
    }
}

/// Renames bound variables to `<prefix><n>` in binder pre-order.
///
/// The prefix is a run of underscores long enough that no free variable
/// name starts with it, so `alpha_equal(a, b)` iff
/// `canonicalize(a) == canonicalize(b)`.
pub fn canonicalize(f: &Formula) -> Formula {
    let free = f.free_vars();
    let mut prefix = String::from("_");
    while free.iter().any(|v| v.name.starts_with(&prefix)) {
        prefix.push('_');
    }
    let mut counter = 0usize;
    canon(f, &prefix, &mut counter, &mut Vec::new())
}

fn canon_term(t: &Term, scope: &[(Var, Var)]) -> Term {
    match t {
        Term::Var(v) => match scope.iter().rev().find(|(old, _)| old == v) {
            Some((_, new)) => Term::Var(new.clone()),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| canon_term(a, scope)).collect()),
    }
}

fn canon(f: &Formula, prefix: &str, counter: &mut usize, scope: &mut Vec<(Var, Var)>) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| canon_term(t, scope)).collect()),
        Formula::Eq(a, b) => Formula::Eq(canon_term(a, scope), canon_term(b, scope)),
        Formula::Not(g) => Formula::not(canon(g, prefix, counter, scope)),
        Formula::Binary(c, a, b) => {
            let a = canon(a, prefix, counter, scope);
            let b = canon(b, prefix, counter, scope);
            Formula::Binary(*c, Box::new(a), Box::new(b))
        }
        Formula::Quant(q, v, body) => {
            let new = Var::new(format!("{prefix}{counter}"), v.sort.clone());
            *counter += 1;
            scope.push((v.clone(), new.clone()));
            let body = canon(body, prefix, counter, scope);
            scope.pop();
            Formula::Quant(*q, new, Box::new(body))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: Term) -> Formula {
        Formula::atom("P", vec![t])
    }

    fn x() -> Var {
        Var::new("x", "S")
    }

    fn y() -> Var {
        Var::new("y", "S")
    }

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_sort("S").unwrap();
        s.add_sort("T").unwrap();
        s.add_constant("c", "S".into()).unwrap();
        s.add_constant("d", "T".into()).unwrap();
        s.add_function("f", vec!["S".into()], "S".into()).unwrap();
        s.add_relation("P", vec!["S".into()]).unwrap();
        s.add_relation("Q", vec!["S".into()]).unwrap();
        s.add_relation("R", vec!["S".into(), "S".into()]).unwrap();
        s
    }

    #[test]
    fn substitution_ignores_non_free_variables() {
        let f = Formula::forall(x(), Formula::implies(p(Term::Var(x())), Formula::atom("Q", vec![Term::Var(x())])));
        let mut b = Substitution::new();
        b.insert(y(), Term::constant("c"));
        assert_eq!(substitute(&sig(), &f, &b).unwrap(), f);
    }

    #[test]
    fn substitution_replaces_free_occurrences() {
        let mut b = Substitution::new();
        b.insert(x(), Term::constant("c"));
        assert_eq!(substitute(&sig(), &p(Term::Var(x())), &b).unwrap(), p(Term::constant("c")));
    }

    #[test]
    fn substitution_avoids_capture_by_priming() {
        let c1 = Var::new("c'", "S");
        let f = Formula::exists(c1.clone(), Formula::atom("R", vec![Term::Var(x()), Term::Var(c1.clone())]));
        let mut b = Substitution::new();
        b.insert(x(), Term::app("f", vec![Term::Var(c1.clone())]));
        let out = substitute(&sig(), &f, &b).unwrap();
        let c2 = Var::new("c''", "S");
        let expected = Formula::exists(
            c2.clone(),
            Formula::atom("R", vec![Term::app("f", vec![Term::Var(c1)]), Term::Var(c2)]),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn substitution_rejects_sort_mismatch() {
        let mut b = Substitution::new();
        b.insert(x(), Term::constant("d"));
        assert!(matches!(
            substitute(&sig(), &p(Term::Var(x())), &b),
            Err(SubstitutionError::SortMismatch { .. })
        ));
    }

    #[test]
    fn alpha_examples() {
        let fx = Formula::forall(x(), p(Term::Var(x())));
        let fy = Formula::forall(y(), p(Term::Var(y())));
        let ex = Formula::exists(x(), p(Term::Var(x())));
        assert!(alpha_equal(&fx, &fy));
        assert!(!alpha_equal(&fx, &ex));

        let rxy = |a: &Var, b: &Var| Formula::atom("R", vec![Term::Var(a.clone()), Term::Var(b.clone())]);
        let lhs = Formula::forall(x(), Formula::forall(y(), rxy(&x(), &y())));
        let rhs = Formula::forall(y(), Formula::forall(x(), rxy(&y(), &x())));
        assert!(alpha_equal(&lhs, &rhs));
        assert_eq!(canonicalize(&lhs), canonicalize(&rhs));
        // swapping argument order is not a renaming
        let swapped = Formula::forall(x(), Formula::forall(y(), rxy(&y(), &x())));
        assert!(!alpha_equal(&lhs, &swapped));
    }

    #[test]
    fn canonical_names_avoid_free_variables() {
        let free = Var::new("_0", "S");
        let f = Formula::forall(x(), Formula::atom("R", vec![Term::Var(x()), Term::Var(free.clone())]));
        let c = canonicalize(&f);
        assert_eq!(c.free_vars().into_iter().collect::<Vec<_>>(), vec![free]);
        assert_eq!(canonicalize(&c), c);
        assert!(alpha_equal(&c, &f));
    }

    #[test]
    fn shadowing_is_respected() {
        // forall x. (P(x) & forall x. Q(x))  vs  forall y. (P(y) & forall z. Q(z))
        let z = Var::new("z", "S");
        let a = Formula::forall(
            x(),
            Formula::and(p(Term::Var(x())), Formula::forall(x(), Formula::atom("Q", vec![Term::Var(x())]))),
        );
        let b = Formula::forall(
            y(),
            Formula::and(p(Term::Var(y())), Formula::forall(z.clone(), Formula::atom("Q", vec![Term::Var(z)]))),
        );
        assert!(alpha_equal(&a, &b));
        assert_eq!(canonicalize(&a), canonicalize(&b));
    }
}
