use std::fmt;

use super::formula::{Formula, Term};
use super::signature::{Signature, Sort};

/// Position of a subformula or subterm: child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Path(pub Vec<usize>);

impl Path {
    fn child(&self, i: usize) -> Path {
        let mut p = self.0.clone();
        p.push(i);
        Path(p)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDiagnostic {
    pub path: Path,
    pub message: String,
}

impl fmt::Display for SortDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path, self.message)
    }
}

/// Returns every sorting violation of `f` over `sig`; empty means well-sorted.
pub fn well_sorted(sig: &Signature, f: &Formula) -> Vec<SortDiagnostic> {
    let mut out = Vec::new();
    check_formula(sig, f, &Path::default(), &mut out);
    out
}

/// Sort of a term, or the diagnostics explaining why it has none.
pub fn term_sort(sig: &Signature, t: &Term) -> Result<Sort, Vec<SortDiagnostic>> {
    let mut out = Vec::new();
    match check_term(sig, t, &Path::default(), &mut out) {
        Some(s) if out.is_empty() => Ok(s),
        _ => Err(out),
    }
}

fn check_term(sig: &Signature, t: &Term, path: &Path, out: &mut Vec<SortDiagnostic>) -> Option<Sort> {
    match t {
        Term::Var(v) => {
            if !sig.has_sort(&v.sort) {
                out.push(SortDiagnostic {
                    path: path.clone(),
                    message: format!("variable `{}` has undeclared sort `{}`", v.name, v.sort),
                });
            }
            Some(v.sort.clone())
        }
        Term::App(name, args) => {
            let arg_sorts: Vec<Option<Sort>> = args
                .iter()
                .enumerate()
                .map(|(i, a)| check_term(sig, a, &path.child(i), out))
                .collect();
            let Some(decl) = sig.function(name) else {
                out.push(SortDiagnostic {
                    path: path.clone(),
                    message: format!("unknown function symbol `{name}`"),
                });
                return None;
            };
            check_args(name, &decl.args, &arg_sorts, path, out);
            Some(decl.result.clone())
        }
    }
}

fn check_args(
    name: &str,
    expected: &[Sort],
    actual: &[Option<Sort>],
    path: &Path,
    out: &mut Vec<SortDiagnostic>,
) {
    if expected.len() != actual.len() {
        out.push(SortDiagnostic {
            path: path.clone(),
            message: format!("`{name}` expects {} arguments, got {}", expected.len(), actual.len()),
        });
        return;
    }
    for (i, (want, got)) in expected.iter().zip(actual).enumerate() {
        if let Some(got) = got {
            if got != want {
                out.push(SortDiagnostic {
                    path: path.child(i),
                    message: format!("argument {} of `{name}` has sort `{got}`, expected `{want}`", i + 1),
                });
            }
        }
    }
}

fn check_formula(sig: &Signature, f: &Formula, path: &Path, out: &mut Vec<SortDiagnostic>) {
    match f {
        Formula::Atom(name, args) => {
            let arg_sorts: Vec<Option<Sort>> = args
                .iter()
                .enumerate()
                .map(|(i, a)| check_term(sig, a, &path.child(i), out))
                .collect();
            match sig.relation(name) {
                Some(decl) => check_args(name, &decl.args, &arg_sorts, path, out),
                None => out.push(SortDiagnostic {
                    path: path.clone(),
                    message: format!("unknown relation symbol `{name}`"),
                }),
            }
        }
        Formula::Eq(a, b) => {
            let sa = check_term(sig, a, &path.child(0), out);
            let sb = check_term(sig, b, &path.child(1), out);
            if let (Some(sa), Some(sb)) = (sa, sb) {
                if sa != sb {
                    out.push(SortDiagnostic {
                        path: path.clone(),
                        message: format!("equality between sorts `{sa}` and `{sb}`"),
                    });
                }
            }
        }
        Formula::Not(g) => check_formula(sig, g, &path.child(0), out),
        Formula::Binary(_, a, b) => {
            check_formula(sig, a, &path.child(0), out);
            check_formula(sig, b, &path.child(1), out);
        }
        Formula::Quant(_, v, body) => {
            if !sig.has_sort(&v.sort) {
                out.push(SortDiagnostic {
                    path: path.clone(),
                    message: format!("bound variable `{}` has undeclared sort `{}`", v.name, v.sort),
                });
            }
            check_formula(sig, body, &path.child(0), out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Var;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_sort("Q").unwrap();
        s.add_sort("B").unwrap();
        s.add_function("add", vec!["Q".into(), "Q".into()], "Q".into()).unwrap();
        s.add_constant("c", "B".into()).unwrap();
        s.add_relation("P", vec!["B".into()]).unwrap();
        s.add_relation(
            "W",
            vec!["B", "B", "Q", "Q", "Q", "Q"].into_iter().map(Sort::from).collect(),
        )
        .unwrap();
        s
    }

    #[test]
    fn matching_profile_is_clean() {
        assert!(well_sorted(&sig(), &Formula::atom("P", vec![Term::constant("c")])).is_empty());
    }

    #[test]
    fn sort_clash_is_reported() {
        let c = Term::constant("c");
        let f = Formula::eq(Term::app("add", vec![c.clone(), c.clone()]), c);
        let diags = well_sorted(&sig(), &f);
        assert!(!diags.is_empty());
        assert!(diags.iter().any(|d| d.message.contains("argument 1 of `add`")));
    }

    #[test]
    fn worldview_relation_is_six_ary() {
        let b = |n: &str| Term::var(n, "B");
        let q = |n: &str| Term::var(n, "Q");
        let f = Formula::atom("W", vec![b("o"), b("b"), q("x"), q("y"), q("z"), q("t")]);
        assert!(well_sorted(&sig(), &f).is_empty());
        let short = Formula::atom("W", vec![b("o"), b("b"), q("x")]);
        assert_eq!(well_sorted(&sig(), &short).len(), 1);
    }

    #[test]
    fn paths_point_into_the_formula() {
        let bad = Formula::not(Formula::forall(
            Var::new("x", "Q"),
            Formula::atom("P", vec![Term::var("x", "Q")]),
        ));
        let diags = well_sorted(&sig(), &bad);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].path.to_string(), "/0/0/0");
    }
}
