use std::time::Duration;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gen::random_formula;
use crate::logic::{Connective, Quantifier, Sort, Term, Var};
use crate::parser::{parse_formula, parse_theory};

fn theory(text: &str) -> Theory {
    parse_theory(text).unwrap_or_else(|e| panic!("{e}"))
}

fn formula(th: &Theory, text: &str) -> Formula {
    parse_formula(text, th.signature()).unwrap_or_else(|e| panic!("{e}"))
}

/// Oracle evaluator: instantiates quantifiers by substituting element
/// names `#k` into the body and evaluates the resulting ground formula.
mod oracle {
    use super::*;

    fn subst_term(t: &Term, v: &Var, e: usize) -> Term {
        match t {
            Term::Var(w) if w == v => Term::constant(format!("#{e}")),
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, v, e)).collect()),
        }
    }

    fn subst(f: &Formula, v: &Var, e: usize) -> Formula {
        match f {
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| subst_term(a, v, e)).collect()),
            Formula::Eq(a, b) => Formula::Eq(subst_term(a, v, e), subst_term(b, v, e)),
            Formula::Not(g) => Formula::Not(Box::new(subst(g, v, e))),
            Formula::Binary(c, a, b) => Formula::Binary(*c, Box::new(subst(a, v, e)), Box::new(subst(b, v, e))),
            Formula::Quant(_, w, _) if w == v => f.clone(),
            Formula::Quant(q, w, body) => Formula::Quant(*q, w.clone(), Box::new(subst(body, v, e))),
        }
    }

    fn term(m: &FiniteInterpretation, t: &Term) -> usize {
        match t {
            Term::App(name, args) if name.starts_with('#') && args.is_empty() => name[1..].parse().unwrap(),
            Term::App(name, args) => {
                let vals: Vec<usize> = args.iter().map(|a| term(m, a)).collect();
                m.function(name, &vals).unwrap()
            }
            Term::Var(v) => panic!("free variable {}", v.name),
        }
    }

    pub fn truth(m: &FiniteInterpretation, f: &Formula) -> bool {
        match f {
            Formula::Atom(r, args) => m.relation(r, &args.iter().map(|a| term(m, a)).collect::<Vec<_>>()).unwrap(),
            Formula::Eq(a, b) => term(m, a) == term(m, b),
            Formula::Not(g) => !truth(m, g),
            Formula::Binary(c, a, b) => {
                let (x, y) = (truth(m, a), truth(m, b));
                match c {
                    Connective::And => x && y,
                    Connective::Or => x || y,
                    Connective::Implies => !x || y,
                    Connective::Iff => x == y,
                }
            }
            Formula::Quant(q, v, body) => {
                let mut vals = (0..m.size(&v.sort)).map(|e| truth(m, &subst(body, v, e)));
                match q {
                    Quantifier::Forall => vals.all(|b| b),
                    Quantifier::Exists => vals.any(|b| b),
                }
            }
        }
    }

    /// Every interpretation of `sig` at `d`.
    pub fn all_interpretations(sig: &Signature, d: &DomainAssignment) -> Vec<FiniteInterpretation> {
        let base = FiniteInterpretation::new(sig, d.clone());
        // (is_function, name, args, range)
        let mut cells: Vec<(bool, String, Vec<usize>, usize)> = Vec::new();
        for f in sig.functions() {
            for args in base.tuples(&f.args) {
                cells.push((true, f.name.clone(), args, base.size(&f.result)));
            }
        }
        for r in sig.relations() {
            for args in base.tuples(&r.args) {
                cells.push((false, r.name.clone(), args, 2));
            }
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; cells.len()];
        loop {
            let mut m = base.clone();
            for ((is_f, name, args, _), &c) in cells.iter().zip(&choice) {
                if *is_f {
                    m.set_function(name, args, c);
                } else {
                    m.set_relation(name, args, c == 1);
                }
            }
            out.push(m);
            let mut k = cells.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < cells[k].3 {
                    break;
                }
                choice[k] = 0;
            }
        }
    }
}

fn random_interpretation(sig: &Signature, rng: &mut ChaCha8Rng) -> FiniteInterpretation {
    let sizes: Vec<usize> = sig.sorts().iter().map(|_| rng.gen_range(1..=3)).collect();
    let mut m = FiniteInterpretation::new(sig, DomainAssignment::new(sig, &sizes));
    for f in sig.functions().cloned().collect::<Vec<_>>() {
        for args in m.tuples(&f.args) {
            let v = rng.gen_range(0..m.size(&f.result));
            m.set_function(&f.name, &args, v);
        }
    }
    for r in sig.relations().cloned().collect::<Vec<_>>() {
        for args in m.tuples(&r.args) {
            let v = rng.gen_bool(0.5);
            m.set_relation(&r.name, &args, v);
        }
    }
    m
}

fn mixed_signature() -> Signature {
    let (a, b) = (Sort::new("A"), Sort::new("B"));
    let mut sig = Signature::new();
    sig.add_sort(a.clone()).unwrap();
    sig.add_sort(b.clone()).unwrap();
    sig.add_constant("c", a.clone()).unwrap();
    sig.add_constant("d", b.clone()).unwrap();
    sig.add_function("f", vec![a.clone(), b.clone()], a.clone()).unwrap();
    sig.add_relation("P", vec![a.clone()]).unwrap();
    sig.add_relation("R", vec![b.clone(), a.clone()]).unwrap();
    sig.add_relation("K", vec![]).unwrap();
    sig
}

#[test]
fn trivial_evaluations() {
    let th = theory("theory T { sorts D; pred P: D; }");
    let mut m = FiniteInterpretation::new(th.signature(), DomainAssignment::uniform(th.signature(), 2));
    m.set_relation("P", &[0], true);
    assert!(holds(&m, &formula(&th, "forall x:D. x = x")).unwrap());
    assert!(!holds(&m, &formula(&th, "forall x:D. P(x)")).unwrap());
    assert!(holds(&m, &formula(&th, "exists x:D. P(x)")).unwrap());
}

#[test]
fn missing_binding_is_an_error() {
    let th = theory("theory T { sorts D; pred P: D; }");
    let m = FiniteInterpretation::new(th.signature(), DomainAssignment::uniform(th.signature(), 1));
    let open = Formula::atom("P", vec![Term::var("x", "D")]);
    assert_eq!(holds(&m, &open), Err(EvalError::MissingBinding("x".into())));
}

proptest! {
    #[test]
    fn evaluator_agrees_with_substitution_oracle(seed in any::<u64>()) {
        let sig = mixed_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&sig, &mut rng, 4);
        let m = random_interpretation(&sig, &mut rng);
        prop_assert_eq!(holds(&m, &f).unwrap(), oracle::truth(&m, &f), "{}", f);
    }
}

#[test]
fn contradiction_has_no_model() {
    let th = theory("theory T { sorts D; const c: D; pred P: D; axiom a: P(c) & ~P(c); }");
    for n in 1..=3 {
        let d = DomainAssignment::uniform(th.signature(), n);
        assert_eq!(find_model(&th, &d, &Budget::default()), ModelOutcome::NotFound);
    }
}

#[test]
fn two_witnesses_need_two_elements() {
    let th = theory("theory T { sorts D; pred P: D; axiom a: exists x:D. P(x); axiom b: exists x:D. ~P(x); }");
    let sig = th.signature();
    assert_eq!(find_model(&th, &DomainAssignment::uniform(sig, 1), &Budget::default()), ModelOutcome::NotFound);
    let d2 = DomainAssignment::uniform(sig, 2);
    let found = find_model(&th, &d2, &Budget::default());
    let m = found.model().expect("model at size 2");
    let brute: Vec<_> = oracle::all_interpretations(sig, &d2)
        .into_iter()
        .filter(|m| th.axioms().iter().all(|a| oracle::truth(m, &a.formula)))
        .collect();
    assert_eq!(brute.len(), 2);
    assert!(brute.contains(m));
}

const FIELD: &str = "theory F2 {
  sorts Q; const zero: Q; const one: Q;
  func add: Q x Q -> Q; func mul: Q x Q -> Q;
  axiom add_assoc: forall x:Q, y:Q, z:Q. (x + y) + z = x + (y + z);
  axiom add_comm: forall x:Q, y:Q. x + y = y + x;
  axiom add_zero: forall x:Q. x + zero = x;
  axiom add_inv: forall x:Q. exists y:Q. x + y = zero;
  axiom mul_assoc: forall x:Q, y:Q, z:Q. (x * y) * z = x * (y * z);
  axiom mul_comm: forall x:Q, y:Q. x * y = y * x;
  axiom mul_one: forall x:Q. x * one = x;
  axiom mul_inv: forall x:Q. x != zero -> exists y:Q. x * y = one;
  axiom distrib: forall x:Q, y:Q, z:Q. x * (y + z) = x * y + x * z;
  axiom nontrivial: zero != one;
}";

#[test]
fn two_element_field() {
    let th = theory(FIELD);
    let d = DomainAssignment::uniform(th.signature(), 2);
    let found = find_model(&th, &d, &Budget::default());
    let m = found.model().expect("GF(2)");
    let brute: Vec<_> = oracle::all_interpretations(th.signature(), &d)
        .into_iter()
        .filter(|m| th.axioms().iter().all(|a| oracle::truth(m, &a.formula)))
        .collect();
    // GF(2) with zero = 0 and with zero = 1.
    assert_eq!(brute.len(), 2);
    let expected = brute.iter().find(|b| b.function("zero", &[]) == Some(0)).unwrap();
    assert_eq!(m, expected);
    assert_eq!(find_model(&th, &DomainAssignment::uniform(th.signature(), 1), &Budget::default()), ModelOutcome::NotFound);
}

#[test]
fn countermodel_for_universal_generalization() {
    let th = theory("theory T { sorts B; const c: B; pred P: B; axiom a: P(c); }");
    let g = formula(&th, "forall x:B. P(x)");
    let max = DomainAssignment::uniform(th.signature(), 3);
    let found = countermodel(&th, &g, &max, &Budget::default());
    let m = found.model().expect("countermodel");
    assert_eq!(m.domains().total(), 2);
    assert_eq!(m.to_text(), "domain B 2\nfunc c = 0\nrel P(0) = true\nrel P(1) = false\n");
    assert!(holds(m, &th.axioms()[0].formula).unwrap());
    assert!(!holds(m, &g).unwrap());
}

#[test]
fn countermodel_with_no_axioms() {
    let th = theory("theory T { sorts B; }");
    let g = formula(&th, "exists x:B. x != x");
    let found = countermodel(&th, &g, &DomainAssignment::uniform(th.signature(), 3), &Budget::default());
    assert_eq!(found.model().unwrap().domains().total(), 1);
}

#[test]
fn entailed_goal_has_no_countermodel() {
    let th = theory("theory T { sorts B; const c: B; pred P: B; axiom a: forall x:B. P(x); }");
    let g = formula(&th, "P(c)");
    for n in 1..=3 {
        let found = countermodel(&th, &g, &DomainAssignment::uniform(th.signature(), n), &Budget::default());
        assert_eq!(found, ModelOutcome::Unknown(UnknownReason::SizeBound));
    }
}

#[test]
fn size_iteration_is_total_then_lex() {
    let th = theory("theory T { sorts A, B; }");
    let order: Vec<String> =
        DomainAssignment::new(th.signature(), &[2, 2]).up_to().iter().map(ToString::to_string).collect();
    assert_eq!(order, vec!["A=1, B=1", "A=1, B=2", "A=2, B=1", "A=2, B=2"]);
}

#[test]
fn clause_limit_is_unknown() {
    let th = theory(FIELD);
    let tiny = Budget::new(10, 100, Duration::from_secs(5));
    let d = DomainAssignment::uniform(th.signature(), 2);
    assert_eq!(find_model(&th, &d, &tiny), ModelOutcome::Unknown(UnknownReason::ClauseLimit));
}

#[test]
fn text_format_round_trips() {
    let sig = mixed_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let m = random_interpretation(&sig, &mut rng);
        assert_eq!(FiniteInterpretation::parse(&m.to_text(), &sig).unwrap(), m);
    }
}

#[test]
fn text_format_rejects_gaps_and_junk() {
    let th = theory("theory T { sorts B; const c: B; pred P: B; }");
    let sig = th.signature();
    assert!(matches!(FiniteInterpretation::parse("domain B 2\nfunc c = 0\nrel P(0) = true\n", sig), Err(InterpError::MissingEntry(_))));
    assert!(matches!(FiniteInterpretation::parse("domain B 1\nfunc c = 3\nrel P(0) = true\n", sig), Err(InterpError::Syntax { line: 2, .. })));
    assert!(matches!(FiniteInterpretation::parse("func c = 0\n", sig), Err(InterpError::MissingDomain(_))));
    assert!(FiniteInterpretation::parse("domain B 1\nfunc c = 0\nrel P(0) = maybe\n", sig).is_err());
}

/// Function-free signature: one constant, two unary predicates.
fn small_signature() -> Signature {
    let s = Sort::new("S");
    let mut sig = Signature::new();
    sig.add_sort(s.clone()).unwrap();
    sig.add_constant("c", s.clone()).unwrap();
    sig.add_relation("P", vec![s.clone()]).unwrap();
    sig.add_relation("Q", vec![s]).unwrap();
    sig
}

#[test]
fn find_model_agrees_with_brute_force() {
    let sig = small_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut found = 0;
    for i in 0..300 {
        let n = rng.gen_range(1..=3);
        let axioms: Vec<NamedFormula> =
            (0..n).map(|k| NamedFormula::new(format!("a{k}"), random_formula(&sig, &mut rng, 3))).collect();
        let Ok(th) = Theory::new(format!("R{i}"), sig.clone(), axioms) else { continue };
        for size in 1..=2 {
            let d = DomainAssignment::uniform(&sig, size);
            let brute =
                oracle::all_interpretations(&sig, &d).iter().any(|m| th.axioms().iter().all(|a| oracle::truth(m, &a.formula)));
            match find_model(&th, &d, &Budget::default()) {
                ModelOutcome::Found(m) => {
                    assert!(brute, "{}", crate::parser::render_theory(&th));
                    assert!(th.axioms().iter().all(|a| oracle::truth(&m, &a.formula)));
                    found += 1;
                }
                ModelOutcome::NotFound => assert!(!brute, "{}", crate::parser::render_theory(&th)),
                other => panic!("{other:?}"),
            }
        }
    }
    assert!(found > 50, "too few satisfiable samples: {found}");
}
