use std::time::Duration;

use super::*;
use crate::logic::{Sort, Term};
use crate::parser::{parse_formula, parse_theory};

fn theory(text: &str) -> Theory {
    parse_theory(text).unwrap_or_else(|e| panic!("{e}"))
}

fn goal(th: &Theory, text: &str) -> Formula {
    parse_formula(text, th.signature()).unwrap_or_else(|e| panic!("{e}"))
}

fn clause_texts(cs: &ClauseSet) -> Vec<String> {
    cs.clauses.iter().map(ToString::to_string).collect()
}

fn unary_sig() -> Signature {
    let mut s = Signature::new();
    s.add_sort("S").unwrap();
    s.add_relation("P", vec![Sort::new("S")]).unwrap();
    s.add_relation("Q", vec![Sort::new("S")]).unwrap();
    s
}

#[test]
fn clausify_universal() {
    let sig = unary_sig();
    let cs = clausify(&sig, &parse_formula("forall x:S. P(x)", &sig).unwrap());
    assert_eq!(clause_texts(&cs), vec!["P(X1)"]);
}

#[test]
fn clausify_existential_introduces_skolem_constant() {
    let sig = unary_sig();
    let cs = clausify(&sig, &parse_formula("exists x:S. P(x)", &sig).unwrap());
    assert_eq!(clause_texts(&cs), vec!["P(sk0)"]);
    let sk = cs.signature.function("sk0").unwrap();
    assert!(sk.args.is_empty());
    assert_eq!(sk.result, Sort::new("S"));
}

#[test]
fn clausify_negated_implication() {
    let sig = unary_sig();
    let cs = clausify(&sig, &parse_formula("~forall x:S. P(x) -> Q(x)", &sig).unwrap());
    assert_eq!(clause_texts(&cs), vec!["P(sk0)", "~Q(sk0)"]);
}

#[test]
fn skolem_functions_depend_on_enclosing_universals() {
    let mut sig = unary_sig();
    sig.add_relation("R", vec![Sort::new("S"), Sort::new("S")]).unwrap();
    let f = parse_formula("forall x:S. forall y:S. P(y) -> exists z:S. R(x, z)", &sig).unwrap();
    let cs = clausify(&sig, &f);
    assert_eq!(clause_texts(&cs), vec!["~P(X1) | R(X2, sk0(X2))"]);
    assert_eq!(cs.signature.function("sk0").unwrap().args.len(), 1);
}

#[test]
fn large_disjunctions_get_definitions() {
    let sig = crate::gen::prop_signature(8);
    let f = parse_formula("(A & B & C & D) | (E & F & G & H) | (A & C & E & G)", &sig).unwrap();
    let cs = clausify(&sig, &f);
    assert!(cs.signature.relations().any(|r| r.name.starts_with("def")));
    assert!(cs.clauses.len() < 64, "{}", cs.clauses.len());
}

#[test]
fn equality_axioms_only_when_needed() {
    let sig = unary_sig();
    let plain = clausify(&sig, &parse_formula("forall x:S. P(x)", &sig).unwrap());
    assert_eq!(plain.clauses.len(), 1);
    let with_eq = clausify(&sig, &parse_formula("forall x:S, y:S. x = y", &sig).unwrap());
    let labels: Vec<String> = with_eq
        .clauses
        .iter()
        .filter_map(|c| match &c.origin {
            Origin::Input(l) if l.starts_with("eq_") => Some(l.clone()),
            _ => None,
        })
        .collect();
    assert_eq!(labels, vec!["eq_refl_S", "eq_sym_S", "eq_trans_S", "eq_cong_P_1", "eq_cong_Q_1"]);
}

const SOCRATES: &str = "theory Syl { sorts D; const socrates: D; pred Man: D; pred Mortal: D;
  axiom a1: forall x:D. Man(x) -> Mortal(x);
  axiom a2: Man(socrates); }";

#[test]
fn syllogism_is_proved_with_checkable_proof() {
    let th = theory(SOCRATES);
    let v = entails(&th, &goal(&th, "Mortal(socrates)"), &Budget::default());
    let proof = v.proof().expect("proved");
    assert!(check_proof(proof, &v.inputs));
    assert_eq!(
        proof.to_string(),
        "step 1: ~Man(X1) | Mortal(X1) [input a1]\n\
         step 2: Man(socrates) [input a2]\n\
         step 3: ~Mortal(socrates) [input negated_goal]\n\
         step 4: Mortal(socrates) [resolution 1.0 2.0 {L:X1 := socrates}]\n\
         step 5: $false [resolution 4.0 3.0 {}]\n"
    );
}

#[test]
fn reflexivity_from_no_axioms() {
    let mut sig = Signature::new();
    sig.add_sort("Q").unwrap();
    let th = Theory::empty("E", sig).unwrap();
    let v = entails(&th, &goal(&th, "forall x:Q. x = x"), &Budget::default());
    assert!(v.is_proved());
}

#[test]
fn non_consequence_saturates() {
    let th = theory("theory T { sorts B; const c: B; pred P: B; axiom a: P(c); }");
    let v = entails(&th, &goal(&th, "forall x:B. P(x)"), &Budget::default());
    assert_eq!(v.outcome, Outcome::Unknown(UnknownReason::Saturated));
}

#[test]
fn budget_exhaustion_is_unknown() {
    let th = theory(SOCRATES);
    let tiny = Budget::new(1, 1, Duration::from_secs(5));
    let v = entails(&th, &goal(&th, "Mortal(socrates)"), &tiny);
    assert!(matches!(v.outcome, Outcome::Unknown(UnknownReason::StepLimit | UnknownReason::ClauseLimit)));
}

#[test]
fn budget_monotonicity() {
    let th = theory(SOCRATES);
    let g = goal(&th, "Mortal(socrates)");
    let mut first = None;
    for steps in 1..20 {
        let v = entails(&th, &g, &Budget::new(10_000, steps, Duration::from_secs(5)));
        if v.is_proved() {
            first.get_or_insert(steps);
        } else {
            assert!(first.is_none(), "lost the proof at {steps} steps");
        }
    }
    assert!(first.is_some());
}

fn proved(th: &Theory, g: &str) -> (Proof, Vec<Clause>) {
    let v = entails(th, &goal(th, g), &Budget::default());
    (v.proof().cloned().unwrap_or_else(|| panic!("not proved: {:?}", v.outcome)), v.inputs)
}

#[test]
fn tampered_unifier_is_rejected() {
    let th = theory(SOCRATES);
    let (mut proof, inputs) = proved(&th, "Mortal(socrates)");
    let step = proof.steps.iter_mut().find(|s| matches!(&s.rule, Rule::Resolution { unifier, .. } if !unifier.is_empty())).unwrap();
    let Rule::Resolution { unifier, .. } = &mut step.rule else { unreachable!() };
    unifier[0].1 = Term::var("R:X9", "D");
    assert!(!check_proof(&proof, &inputs));
}

#[test]
fn nonempty_last_clause_is_rejected() {
    let th = theory(SOCRATES);
    let (mut proof, inputs) = proved(&th, "Mortal(socrates)");
    proof.steps.pop();
    assert_eq!(verify_proof(&proof, &inputs), Err(ProofError::NotARefutation));
}

#[test]
fn forged_input_is_rejected() {
    let th = theory(SOCRATES);
    let (mut proof, inputs) = proved(&th, "Mortal(socrates)");
    proof.steps[1].clause = vec![Literal::new(true, "Mortal", vec![Term::constant("socrates")])];
    assert!(!check_proof(&proof, &inputs));
}

#[test]
fn ill_sorted_unifier_is_rejected() {
    let th = theory("theory T { sorts A, B; const a: A; const b: B; pred P: A; axiom x1: forall x:A. P(x); }");
    let (mut proof, inputs) = proved(&th, "P(a)");
    for step in &mut proof.steps {
        if let Rule::Resolution { unifier, .. } = &mut step.rule {
            for (_, t) in unifier.iter_mut() {
                *t = Term::constant("b");
            }
        }
    }
    assert!(!check_proof(&proof, &inputs));
}

#[test]
fn wrong_conclusion_is_rejected() {
    let th = theory(SOCRATES);
    let (mut proof, inputs) = proved(&th, "Mortal(socrates)");
    proof.steps[3].clause = vec![Literal::new(false, "Mortal", vec![Term::constant("socrates")])];
    assert!(!check_proof(&proof, &inputs));
}

#[test]
fn factoring_steps_check() {
    // P(x) | P(y) factors to P(x); needed to refute against ~P(c) alone.
    let th = theory("theory T { sorts D; const c: D; pred P: D; axiom a: forall x:D, y:D. P(x) | P(y); }");
    let (proof, inputs) = proved(&th, "P(c)");
    assert!(check_proof(&proof, &inputs));
}

#[test]
fn sort_separation_blocks_inference() {
    // Without sorts, x = y for all x, y would let P(a) be derived from P(b).
    let th = theory("theory T { sorts A, B; const a: A; const b: B; pred P: A; pred R: B; axiom r: R(b); axiom s: forall x:B, y:B. x = y; }");
    let v = entails(&th, &goal(&th, "P(a)"), &Budget::default());
    assert!(!v.is_proved());
}

#[test]
fn equality_congruence() {
    let th = theory("theory T { sorts D; const a: D; const b: D; func f: D -> D; pred P: D; axiom e: a = b; axiom p: P(f(a)); }");
    let (proof, inputs) = proved(&th, "P(f(b))");
    assert!(check_proof(&proof, &inputs));
}

#[test]
fn inconsistency_refuted() {
    let th = theory("theory T { pred A; axiom a: A; axiom b: ~A; }");
    let v = refute(th.signature(), th.axioms(), &Budget::default());
    assert!(v.is_proved());
}

#[test]
fn proof_serializes() {
    let th = theory(SOCRATES);
    let (proof, inputs) = proved(&th, "Mortal(socrates)");
    let json = serde_json::to_string(&proof).unwrap();
    let back: Proof = serde_json::from_str(&json).unwrap();
    assert_eq!(back, proof);
    assert!(check_proof(&back, &inputs));
}
