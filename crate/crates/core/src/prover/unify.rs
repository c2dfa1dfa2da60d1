use crate::logic::{Signature, Substitution, Term, Var};

/// Most general unifier of two terms, or `None` when the terms clash, a
/// variable would be bound to a term of another sort, or the occurs check
/// fails. The result is idempotent.
pub fn unify(sig: &Signature, t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    unify_into(sig, t1, t2, &mut s).then(|| resolve(&s))
}

/// Simultaneous unification of argument lists.
pub fn unify_args(sig: &Signature, a: &[Term], b: &[Term]) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a.iter().zip(b) {
        if !unify_into(sig, x, y, &mut s) {
            return None;
        }
    }
    Some(resolve(&s))
}

fn walk<'a>(t: &'a Term, s: &'a Substitution) -> &'a Term {
    let mut t = t;
    while let Term::Var(v) = t {
        match s.get(v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

fn occurs(v: &Var, t: &Term, s: &Substitution) -> bool {
    match walk(t, s) {
        Term::Var(w) => w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
    }
}

fn unify_into(sig: &Signature, t1: &Term, t2: &Term, s: &mut Substitution) -> bool {
    let a = walk(t1, s).clone();
    let b = walk(t2, s).clone();
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), other) | (other, Term::Var(x)) => {
            if other.sort_in(sig).as_ref() != Some(&x.sort) || occurs(x, other, s) {
                return false;
            }
            s.insert(x.clone(), other.clone());
            true
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(p, q)| unify_into(sig, p, q, s))
        }
    }
}

fn resolve(s: &Substitution) -> Substitution {
    fn full(t: &Term, s: &Substitution) -> Term {
        match walk(t, s) {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| full(a, s)).collect()),
        }
    }
    s.iter().map(|(v, t)| (v.clone(), full(t, s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Sort;

    fn sig() -> Signature {
        let q = Sort::new("Q");
        let mut s = Signature::new();
        s.add_sort("Q").unwrap();
        s.add_sort("B").unwrap();
        s.add_function("f", vec![q.clone(), q.clone()], q.clone()).unwrap();
        s.add_function("g", vec![q.clone()], q.clone()).unwrap();
        s.add_function("h", vec![q.clone()], q.clone()).unwrap();
        s.add_constant("c", q).unwrap();
        s.add_constant("b", Sort::new("B")).unwrap();
        s
    }

    fn v(n: &str) -> Term {
        Term::var(n, "Q")
    }

    #[test]
    fn binds_variable_to_constant() {
        let s = unify(&sig(), &v("x"), &Term::constant("c")).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[&Var::new("x", "Q")], Term::constant("c"));
    }

    #[test]
    fn occurs_check() {
        assert!(unify(&sig(), &Term::app("g", vec![v("x")]), &v("x")).is_none());
    }

    #[test]
    fn nested_unifier_equalizes_both_sides() {
        let t1 = Term::app("f", vec![v("x"), Term::app("g", vec![v("y")])]);
        let t2 = Term::app("f", vec![Term::app("g", vec![v("z")]), Term::app("g", vec![Term::constant("c")])]);
        let s = unify(&sig(), &t1, &t2).unwrap();
        assert_eq!(t1.apply(&s), t2.apply(&s));
        assert_eq!(s[&Var::new("x", "Q")], Term::app("g", vec![v("z")]));
        assert_eq!(s[&Var::new("y", "Q")], Term::constant("c"));
    }

    #[test]
    fn rejects_cross_sort_binding() {
        assert!(unify(&sig(), &v("x"), &Term::constant("b")).is_none());
        assert!(unify(&sig(), &v("x"), &Term::var("x", "B")).is_none());
    }

    #[test]
    fn symbol_clash() {
        assert!(unify(&sig(), &Term::app("g", vec![v("x")]), &Term::app("h", vec![v("x")])).is_none());
    }

    #[test]
    fn chained_bindings_resolve() {
        let t1 = Term::app("f", vec![v("x"), v("y")]);
        let t2 = Term::app("f", vec![v("y"), Term::app("g", vec![v("z")])]);
        let s = unify(&sig(), &t1, &t2).unwrap();
        assert_eq!(t1.apply(&s), t2.apply(&s));
        for t in s.values() {
            assert_eq!(t.apply(&s), *t, "idempotent");
        }
    }
}
