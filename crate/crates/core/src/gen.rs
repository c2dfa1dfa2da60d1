//! Seeded random generation of formulas and small propositional theories,
//! for property suites and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::logic::{Formula, NamedFormula, Signature, Sort, Term, Theory, Var};

const VAR_NAMES: &[&str] = &["x", "y", "z", "x'", "u1"];

/// Random closed, well-sorted formula over `sig` with connective depth at
/// most `depth`. Variable names are drawn from a small pool, so shadowing
/// and reuse across sorts are common.
pub fn random_formula<R: Rng>(sig: &Signature, rng: &mut R, depth: usize) -> Formula {
    let mut g = Gen { sig, scope: Vec::new() };
    g.formula(rng, depth)
}

struct Gen<'a> {
    sig: &'a Signature,
    scope: Vec<Var>,
}

impl Gen<'_> {
    fn formula<R: Rng>(&mut self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.atom(rng);
        }
        match rng.gen_range(0..7) {
            0 => Formula::not(self.formula(rng, depth - 1)),
            1 => Formula::and(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            2 => Formula::or(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            3 => Formula::implies(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            4 => Formula::iff(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            _ => {
                let Some(sort) = self.sig.sorts().choose(rng).cloned() else {
                    return self.atom(rng);
                };
                let v = Var::new(*VAR_NAMES.choose(rng).expect("nonempty"), sort);
                self.scope.push(v.clone());
                let body = self.formula(rng, depth - 1);
                self.scope.pop();
                if rng.gen_bool(0.5) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }

    fn atom<R: Rng>(&mut self, rng: &mut R) -> Formula {
        let mut options: Vec<Option<&str>> = self
            .sig
            .relations()
            .filter(|r| r.args.iter().all(|s| self.can_make(s)))
            .map(|r| Some(r.name.as_str()))
            .collect();
        let eq_sorts: Vec<Sort> = self.sig.sorts().iter().filter(|s| self.can_make(s)).cloned().collect();
        if !eq_sorts.is_empty() {
            options.push(None);
        }
        match options.choose(rng).copied() {
            Some(Some(name)) => {
                let decl = self.sig.relation(name).expect("listed").clone();
                let args = decl.args.iter().map(|s| self.term(rng, s, 2)).collect();
                Formula::atom(name, args)
            }
            Some(None) => {
                let s = eq_sorts.choose(rng).expect("nonempty").clone();
                Formula::eq(self.term(rng, &s, 2), self.term(rng, &s, 2))
            }
            None => panic!("signature admits no closed atoms"),
        }
    }

    /// A term of the sort can be built from bound variables and constants alone.
    fn can_make(&self, s: &Sort) -> bool {
        self.scope.iter().any(|v| &v.sort == s) || self.sig.functions().any(|f| f.args.is_empty() && &f.result == s)
    }

    fn term<R: Rng>(&self, rng: &mut R, s: &Sort, depth: usize) -> Term {
        let mut options: Vec<Term> = self.scope.iter().filter(|v| &v.sort == s).cloned().map(Term::Var).collect();
        for f in self.sig.functions().filter(|f| &f.result == s) {
            if f.args.is_empty() {
                options.push(Term::constant(f.name.clone()));
            } else if depth > 0 && f.args.iter().all(|a| self.can_make(a)) {
                options.push(Term::app(f.name.clone(), Vec::new()));
            }
        }
        match options.choose(rng).expect("checked by can_make").clone() {
            Term::App(name, args) if args.is_empty() && !self.sig.function(&name).expect("declared").args.is_empty() => {
                let decl = self.sig.function(&name).expect("declared").clone();
                let args = decl.args.iter().map(|a| self.term(rng, a, depth - 1)).collect();
                Term::App(name, args)
            }
            t => t,
        }
    }
}

/// Signature with `n` propositional atoms named `A`, `B`, `C`, ...
pub fn prop_signature(n: usize) -> Signature {
    let mut sig = Signature::new();
    for name in prop_atoms(n) {
        sig.add_relation(name, Vec::new()).expect("distinct names");
    }
    sig
}

pub fn prop_atoms(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'A' + i as u8).to_string()).collect()
}

/// Random quantifier-free formula over the propositional atoms.
pub fn random_prop_formula<R: Rng>(atoms: &[String], rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::prop(atoms.choose(rng).expect("at least one atom").clone());
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_prop_formula(atoms, rng, depth - 1)),
        1 => Formula::and(random_prop_formula(atoms, rng, depth - 1), random_prop_formula(atoms, rng, depth - 1)),
        2 => Formula::or(random_prop_formula(atoms, rng, depth - 1), random_prop_formula(atoms, rng, depth - 1)),
        3 => Formula::implies(random_prop_formula(atoms, rng, depth - 1), random_prop_formula(atoms, rng, depth - 1)),
        _ => Formula::iff(random_prop_formula(atoms, rng, depth - 1), random_prop_formula(atoms, rng, depth - 1)),
    }
}

/// Random propositional theory with between 1 and `max_axioms` axioms over
/// the first `atoms` letters. Alpha-duplicate draws are discarded.
pub fn random_prop_theory<R: Rng>(name: &str, atoms: usize, max_axioms: usize, rng: &mut R) -> Theory {
    let sig = prop_signature(atoms);
    let names = prop_atoms(atoms);
    let n = rng.gen_range(1..=max_axioms);
    let mut axioms: Vec<NamedFormula> = Vec::new();
    for i in 0..n {
        let f = random_prop_formula(&names, rng, 3);
        if !axioms.iter().any(|a| a.formula == f) {
            axioms.push(NamedFormula::new(format!("a{}", i + 1), f));
        }
    }
    Theory::new(name, sig, axioms).expect("quantifier-free formulas over the signature")
}
