//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (no test harness) so the lines always show.
//! Every criterion produces a JSON report without timings; criterion 9
//! runs the others again and compares the reports byte for byte.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempfile::TempDir;

use whyq::answers::{compare_theories, Limits, Mode, Truth};
use whyq::gen::{prop_atoms, random_formula, random_prop_theory};
use whyq::logic::{alpha_equal, split_conjunctions, Connective, Formula, NamedFormula, Quantifier, Signature, Sort, Term, Var};
use whyq::model::{countermodel, find_model, find_model_upto, holds, DomainAssignment, ModelOutcome};
use whyq::parser::tptp::{check_tptp, export_tptp};
use whyq::parser::{parse_formula, parse_inline, render};
use whyq::prover::{check_proof, clausify_all, entails, Budget, ClausifyOptions, Literal, Outcome, Rule, NEGATED_GOAL};
use whyq::specrel::lorentz::{q, Q, Vec3};
use whyq::specrel::{
    check_axiom_instances, check_field_laws, check_noftl, default_roster, noftl_formula, specrel0_theory, specrel_theory,
    BodyKind, Roster, StandardModel, INSTANCE_AXIOMS, ROSTER_SEED0,
};
use whyq::Theory;

type Criterion = (&'static str, fn() -> Check);

struct Check {
    pass: bool,
    summary: String,
    report: Value,
}

fn whyq(dir: &Path, args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_whyq"))
        .current_dir(dir)
        .env_remove("WHY_REGISTRY")
        .args(["--registry", &dir.display().to_string(), "--json"])
        .args(args)
        .output()
        .expect("whyq runs");
    let elapsed = start.elapsed();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), value, elapsed)
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

// ---- truth-table oracle ----------------------------------------------------

fn value(f: &Formula, row: &[(String, bool)]) -> bool {
    match f {
        Formula::Atom(p, _) => row.iter().find(|(a, _)| a == p).map(|(_, v)| *v).expect("atom has a column"),
        Formula::Not(g) => !value(g, row),
        Formula::Binary(c, a, b) => {
            let (a, b) = (value(a, row), value(b, row));
            match c {
                Connective::And => a && b,
                Connective::Or => a || b,
                Connective::Implies => !a || b,
                Connective::Iff => a == b,
            }
        }
        other => panic!("not propositional: {other:?}"),
    }
}

fn tt_entails(atoms: &[String], premises: &[&Formula], goal: &Formula) -> bool {
    (0..1u32 << atoms.len()).all(|bits| {
        let row: Vec<(String, bool)> = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect();
        !premises.iter().all(|p| value(p, &row)) || value(goal, &row)
    })
}

fn tt_nonworse(atoms: &[String], t2: &Theory, t1: &Theory) -> bool {
    let prem: Vec<&Formula> = t1.axioms().iter().map(|a| &a.formula).collect();
    t2.axioms().iter().all(|a| tt_entails(atoms, &prem, &a.formula))
}

fn tt_piecewise(atoms: &[String], t2: &Theory, t1: &Theory) -> bool {
    t2.axioms().iter().all(|a| t1.axioms().iter().any(|b| tt_entails(atoms, &[&b.formula], &a.formula)))
}

// ---- criteria --------------------------------------------------------------

fn specrel_comparison() -> Check {
    let dir = TempDir::new().unwrap();
    let (code, r, elapsed) = whyq(dir.path(), &["compare", "specrel0", "specrel"]);
    let witnesses = r["witnesses"].as_array().cloned().unwrap_or_default();
    let identity = witnesses.len() == specrel0_theory().len()
        && witnesses.iter().all(|w| w["kind"] == "identity" && w["axiom"] == w["by"]);
    let by_membership = r["piecewise_nonworse"]["evidence"]
        .as_array()
        .is_some_and(|ev| !ev.is_empty() && ev.iter().all(|e| e["kind"] == "membership"));
    let subset = specrel0_theory().is_alpha_subset_of(&specrel_theory());
    let pass = code == 0
        && subset
        && r["piecewise_nonworse"]["value"] == "yes"
        && by_membership
        && identity
        && r["better"]["piecewise"]["value"] == "unknown"
        && elapsed < Duration::from_secs(1);
    Check {
        pass,
        summary: format!(
            "compare specrel0 specrel: piecewise_nonworse={} ({} identity witnesses), piecewise better={}, {} (< 1 s)",
            r["piecewise_nonworse"]["value"].as_str().unwrap_or("?"),
            witnesses.len(),
            r["better"]["piecewise"]["value"].as_str().unwrap_or("?"),
            secs(elapsed)
        ),
        report: r,
    }
}

fn kepler_boyle() -> Check {
    let dir = TempDir::new().unwrap();
    let (code_p, p, t_p) = whyq(dir.path(), &["pointless", "{K ∧ B}", "K"]);
    let (code_c, c, t_c) = whyq(dir.path(), &["compare", "{K, B}", "{K ∧ B}", "--mode", "piecewise"]);
    let witness: Vec<&str> = p["witness"]["axioms"]
        .as_array()
        .map(|a| a.iter().filter_map(|x| x["formula"].as_str()).collect())
        .unwrap_or_default();
    // Oracle: {K, B} is piecewise nonworse than {K & B}, not conversely.
    let atoms = vec!["K".to_string(), "B".to_string()];
    let (split, conj) = (parse_inline("S", "{K, B}", &[]).unwrap().0, parse_inline("C", "{K & B}", &[]).unwrap().0);
    let oracle_better = tt_piecewise(&atoms, &split, &conj) && !tt_piecewise(&atoms, &conj, &split);
    let pass = code_p == 0
        && p["pointless"]["value"] == "yes"
        && witness.iter().copied().collect::<BTreeSet<_>>() == BTreeSet::from(["K", "B"])
        && code_c == 0
        && c["better"]["piecewise"]["value"] == "yes"
        && oracle_better
        && t_p < Duration::from_secs(1)
        && t_c < Duration::from_secs(1);
    Check {
        pass,
        summary: format!(
            "pointless {{K∧B}} for K = {} with witness {{{}}}; {{K,B}} piecewise better than {{K∧B}} = {} (oracle agrees: {}); {} / {} (< 1 s each)",
            p["pointless"]["value"].as_str().unwrap_or("?"),
            witness.join(","),
            c["better"]["piecewise"]["value"].as_str().unwrap_or("?"),
            oracle_better,
            secs(t_p),
            secs(t_c)
        ),
        report: json!({ "pointless": p, "compare": c }),
    }
}

fn weaker(name: &str, base: &Theory, rng: &mut ChaCha8Rng) -> Theory {
    let keep: Vec<NamedFormula> = split_conjunctions(base).axioms().iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    Theory::new(name, base.signature().clone(), keep).unwrap()
}

fn preorder_laws() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let limits = Limits::default();
    let modes = [Mode::Nonworse, Mode::Piecewise];
    let (mut comparisons, mut chains, mut subsets, mut violations) = (0usize, 0usize, 0usize, Vec::new());
    let triples = 200;
    for i in 0..triples {
        let n = rng.gen_range(1..=4);
        let atoms = prop_atoms(n);
        let c = random_prop_theory("C", n, 4, &mut rng);
        let (b, a) = if i % 2 == 0 {
            let b = weaker("B", &c, &mut rng);
            let a = weaker("A", &b, &mut rng);
            (b, a)
        } else {
            (random_prop_theory("B", n, 4, &mut rng), random_prop_theory("A", n, 4, &mut rng))
        };
        let ts = [&a, &b, &c];
        let mut nw = [[false; 3]; 3];
        let mut pw = [[false; 3]; 3];
        for (x, tx) in ts.iter().enumerate() {
            for (y, ty) in ts.iter().enumerate() {
                comparisons += 1;
                let cmp = compare_theories(tx, ty, &modes, &limits).unwrap();
                let (n_v, p_v) = (cmp.nonworse.unwrap(), cmp.piecewise_nonworse.unwrap());
                let want = |b: bool| if b { Truth::Yes } else { Truth::No };
                if n_v.truth != want(tt_nonworse(&atoms, tx, ty)) || !n_v.recheck() {
                    violations.push(format!("triple {i} {x}{y}: nonworse disagrees with the oracle"));
                }
                if p_v.truth != want(tt_piecewise(&atoms, tx, ty)) || !p_v.recheck() {
                    violations.push(format!("triple {i} {x}{y}: piecewise disagrees with the oracle"));
                }
                if tx.is_alpha_subset_of(ty) {
                    subsets += 1;
                    if p_v.truth != Truth::Yes {
                        violations.push(format!("triple {i} {x}{y}: subset without piecewise"));
                    }
                }
                if p_v.truth == Truth::Yes && n_v.truth != Truth::Yes {
                    violations.push(format!("triple {i} {x}{y}: piecewise without nonworse"));
                }
                nw[x][y] = n_v.is_yes();
                pw[x][y] = p_v.is_yes();
            }
        }
        for (name, rel) in [("nonworse", &nw), ("piecewise", &pw)] {
            for x in 0..3 {
                if !rel[x][x] {
                    violations.push(format!("triple {i}: {name} not reflexive at {x}"));
                }
                for y in 0..3 {
                    for z in 0..3 {
                        if rel[x][y] && rel[y][z] {
                            chains += 1;
                            if !rel[x][z] {
                                violations.push(format!("triple {i}: {name} not transitive at {x}{y}{z}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && chains > triples && elapsed < Duration::from_secs(60);
    Check {
        pass,
        summary: format!(
            "{triples} triples, {comparisons} oracle-checked comparisons, {chains} transitivity chains, {subsets} subset pairs, {} violations, {} (< 60 s)",
            violations.len(),
            secs(elapsed)
        ),
        report: json!({
            "triples": triples,
            "comparisons": comparisons,
            "chains": chains,
            "subset_pairs": subsets,
            "violations": violations,
        }),
    }
}

const CURATED: [(&str, &str, &str); 10] = [
    ("syllogism", "{forall x. Man(x) -> Mortal(x), Man(socrates)}", "Mortal(socrates)"),
    ("instantiation", "{forall x. P(x)}", "P(c)"),
    ("existential generalization", "{P(c)}", "exists x. P(x)"),
    ("predicate congruence", "{a = b, P(a)}", "P(b)"),
    ("function congruence", "{a = b}", "f(a) = f(b)"),
    ("equality transitivity", "{a = b, b = c}", "a = c"),
    ("implication chain", "{forall x. P(x) -> Q(x), forall x. Q(x) -> R(x)}", "forall x. P(x) -> R(x)"),
    ("quantifier swap", "{exists x. forall y. L(x, y)}", "forall y. exists x. L(x, y)"),
    ("case split", "{P | Q, P -> R, Q -> R}", "R"),
    ("drinker", "{}", "exists x. D(x) -> forall y. D(y)"),
];

/// Damaged copies of a proof, each of which must be rejected.
fn tampered(proof: &whyq::prover::Proof) -> Vec<(&'static str, whyq::prover::Proof)> {
    let mut out = Vec::new();
    let mut p = proof.clone();
    p.steps.pop();
    out.push(("truncated", p));
    let mut p = proof.clone();
    p.steps[0].clause = vec![Literal::new(true, "Forged", vec![])];
    out.push(("forged input", p));
    let mut p = proof.clone();
    if let Some(first) = proof.steps.iter().find(|s| !s.clause.is_empty()) {
        p.steps.last_mut().unwrap().clause = first.clause.clone();
        out.push(("non-empty conclusion", p));
    }
    let mut p = proof.clone();
    if let Some(step) = p.steps.iter_mut().rev().find(|s| matches!(s.rule, Rule::Resolution { .. })) {
        let id = step.id;
        if let Rule::Resolution { left, .. } = &mut step.rule {
            *left = id;
        }
        out.push(("self-referencing parent", p));
    }
    out
}

fn prover_soundness() -> Check {
    let mut entries = Vec::new();
    let (mut proved, mut controls, mut rejected, mut slowest) = (0, 0, 0, Duration::ZERO);
    for (name, th, goal) in CURATED {
        let (th, goals) = parse_inline(name, th, &[goal]).expect("curated problem parses");
        let goal = &goals[0];
        let start = Instant::now();
        let v = entails(&th, goal, &Budget::default());
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let mut inputs = th.axioms().to_vec();
        inputs.push(NamedFormula::new(NEGATED_GOAL, Formula::not(goal.clone())));
        let fresh = clausify_all(th.signature(), &inputs, ClausifyOptions::default()).clauses;
        let entry = match &v.outcome {
            Outcome::Proved(p) => {
                let checks = check_proof(p, &v.inputs) && check_proof(p, &fresh);
                if checks && elapsed <= Duration::from_secs(5) {
                    proved += 1;
                }
                let damaged: Vec<Value> = tampered(p)
                    .into_iter()
                    .map(|(what, bad)| {
                        controls += 1;
                        let ok = check_proof(&bad, &fresh);
                        rejected += usize::from(!ok);
                        json!({ "control": what, "accepted": ok })
                    })
                    .collect();
                json!({ "name": name, "proved": true, "checked": checks, "steps": p.steps.len(), "controls": damaged })
            }
            Outcome::Unknown(reason) => json!({ "name": name, "proved": false, "reason": reason.to_string() }),
        };
        entries.push(entry);
    }
    let pass = proved == CURATED.len() && controls > 0 && rejected == controls;
    Check {
        pass,
        summary: format!(
            "{proved}/{} curated entailments proved and checked (slowest {}, <= 5 s each); {rejected}/{controls} tampered proofs rejected",
            CURATED.len(),
            secs(slowest)
        ),
        report: json!(entries),
    }
}

/// A structure over one sort of size `n`: a value per constant and a
/// bitmask per unary predicate.
struct Small {
    n: usize,
    consts: Vec<(String, usize)>,
    preds: Vec<(String, u32)>,
}

fn term_value(m: &Small, t: &Term, env: &[(Var, usize)]) -> usize {
    match t {
        Term::Var(v) => env.iter().rev().find(|(w, _)| w == v).map(|(_, x)| *x).expect("bound variable"),
        Term::App(c, args) if args.is_empty() => m.consts.iter().find(|(k, _)| **k == **c).expect("constant").1,
        Term::App(f, _) => panic!("function-free signatures only, got {f}"),
    }
}

fn truth(m: &Small, f: &Formula, env: &mut Vec<(Var, usize)>) -> bool {
    match f {
        Formula::Atom(p, args) => {
            let bits = m.preds.iter().find(|(k, _)| k == p).expect("predicate").1;
            match args.as_slice() {
                [] => bits & 1 == 1,
                [t] => bits >> term_value(m, t, env) & 1 == 1,
                _ => panic!("unary predicates only"),
            }
        }
        Formula::Eq(a, b) => term_value(m, a, env) == term_value(m, b, env),
        Formula::Not(g) => !truth(m, g, env),
        Formula::Binary(c, a, b) => {
            let (a, b) = (truth(m, a, env), truth(m, b, env));
            match c {
                Connective::And => a && b,
                Connective::Or => a || b,
                Connective::Implies => !a || b,
                Connective::Iff => a == b,
            }
        }
        Formula::Quant(q, v, body) => {
            let mut results = (0..m.n).map(|x| {
                env.push((v.clone(), x));
                let r = truth(m, body, env);
                env.pop();
                r
            });
            match q {
                Quantifier::Forall => results.all(|r| r),
                Quantifier::Exists => results.any(|r| r),
            }
        }
    }
}

/// Every structure of size `n` for `consts` constants and `preds` unary predicates.
fn structures(n: usize, consts: &[String], preds: &[String]) -> Vec<Small> {
    let mut out = vec![Small { n, consts: Vec::new(), preds: Vec::new() }];
    for c in consts {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n).map(move |x| {
                    let mut consts = s.consts.clone();
                    consts.push((c.clone(), x));
                    Small { n, consts, preds: s.preds.clone() }
                })
            })
            .collect();
    }
    for p in preds {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..1u32 << n).map(move |bits| {
                    let mut preds = s.preds.clone();
                    preds.push((p.clone(), bits));
                    Small { n, consts: s.consts.clone(), preds }
                })
            })
            .collect();
    }
    out
}

fn to_small(m: &whyq::model::FiniteInterpretation, u: &Sort, consts: &[String], preds: &[String]) -> Small {
    let n = m.size(u);
    Small {
        n,
        consts: consts.iter().map(|c| (c.clone(), m.function(c, &[]).expect("constant"))).collect(),
        preds: preds
            .iter()
            .map(|p| (p.clone(), (0..n).fold(0u32, |acc, x| acc | u32::from(m.relation(p, &[x]) == Some(true)) << x)))
            .collect(),
    }
}

fn model_finder_soundness() -> Check {
    let budget = Budget::default();
    // The single-constant countermodel.
    let (th, goals) = parse_inline("Pc", "{P(c)}", &["forall x. P(x)"]).unwrap();
    let max = DomainAssignment::uniform(th.signature(), 3);
    let found = countermodel(&th, &goals[0], &max, &budget);
    let (size, valid) = match found.model() {
        Some(m) => (m.domains().total(), holds(m, &th.axioms()[0].formula) == Ok(true) && holds(m, &goals[0]) == Ok(false)),
        None => (0, false),
    };
    let at_one = countermodel(&th, &goals[0], &DomainAssignment::uniform(th.signature(), 1), &budget);
    let none_at_one = matches!(at_one, ModelOutcome::Unknown(_));

    // Brute-force agreement.
    let u = Sort::new("U");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut theories, mut queries, mut disagreements) = (0usize, 0usize, Vec::new());
    let consts = vec!["c".to_string()];
    for npreds in 0..=2 {
        let preds: Vec<String> = ["P", "Q"][..npreds].iter().map(|s| s.to_string()).collect();
        let mut sig = Signature::new();
        sig.add_sort(u.clone()).unwrap();
        for c in &consts {
            sig.add_function(c.as_str(), vec![], u.clone()).unwrap();
        }
        for p in &preds {
            sig.add_relation(p.as_str(), vec![u.clone()]).unwrap();
        }
        for k in 0..100 {
            let mut axioms: Vec<NamedFormula> = Vec::new();
            for i in 0..rng.gen_range(1..=3) {
                let f = random_formula(&sig, &mut rng, 3);
                if !axioms.iter().any(|a| alpha_equal(&a.formula, &f)) {
                    axioms.push(NamedFormula::new(format!("f{i}"), f));
                }
            }
            let th = Theory::new(format!("T{npreds}_{k}"), sig.clone(), axioms).unwrap();
            theories += 1;
            let mut smallest = None;
            for n in 1..=2 {
                queries += 1;
                let brute = structures(n, &consts, &preds)
                    .iter()
                    .any(|s| th.axioms().iter().all(|a| truth(s, &a.formula, &mut Vec::new())));
                if brute && smallest.is_none() {
                    smallest = Some(n);
                }
                let got = find_model(&th, &DomainAssignment::uniform(&sig, n), &budget);
                let agrees = match &got {
                    ModelOutcome::Found(m) => {
                        let s = to_small(m, &u, &consts, &preds);
                        brute && s.n == n && th.axioms().iter().all(|a| truth(&s, &a.formula, &mut Vec::new()))
                    }
                    ModelOutcome::NotFound => !brute,
                    ModelOutcome::Unknown(_) => false,
                };
                if !agrees {
                    disagreements.push(format!("{} at size {n}", th.name()));
                }
            }
            let upto = find_model_upto(&th, &DomainAssignment::uniform(&sig, 2), &budget);
            let min = upto.model().map(|m| m.domains().total());
            if min != smallest {
                disagreements.push(format!("{}: smallest model {min:?}, brute force {smallest:?}", th.name()));
            }
        }
    }
    let pass = size == 2 && valid && none_at_one && disagreements.is_empty();
    Check {
        pass,
        summary: format!(
            "countermodel to P(c) |= forall x. P(x) at total size {size} (validated: {valid}, none at size 1: {none_at_one}); {theories} theories, {queries} sized queries vs brute force, {} disagreements",
            disagreements.len()
        ),
        report: json!({
            "countermodel_size": size,
            "validated": valid,
            "none_at_size_one": none_at_one,
            "countermodel": found.model().map(|m| m.to_text()),
            "theories": theories,
            "queries": queries,
            "disagreements": disagreements,
        }),
    }
}

fn dot(a: &Vec3, b: &Vec3) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// Speed squared of a body with velocity `w`, seen by an inertial observer
/// moving at `u`: (|u - w|^2 - |u x w|^2) / (1 - u.w)^2.
fn relative_speed2(u: &Vec3, w: &Vec3) -> Q {
    let d = [&u[0] - &w[0], &u[1] - &w[1], &u[2] - &w[2]];
    let x = [&u[1] * &w[2] - &u[2] * &w[1], &u[2] * &w[0] - &u[0] * &w[2], &u[0] * &w[1] - &u[1] * &w[0]];
    let den = q(1, 1) - dot(u, w);
    (dot(&d, &d) - dot(&x, &x)) / (&den * &den)
}

fn noftl_model_check() -> Check {
    let start = Instant::now();
    let roster = default_roster();
    let m = StandardModel::new(roster.clone());
    let observers = roster.ids(BodyKind::Observer);
    let photons = roster.ids(BodyKind::Photon);
    let velocity = |b: usize| roster.bodies[b].worldline.velocity.clone();
    let one = q(1, 1);
    let (mut obs_pairs, mut ph_pairs, mut mismatches) = (0usize, 0usize, Vec::new());
    for &o in &observers {
        for &b in observers.iter().chain(&photons) {
            if b == o {
                continue;
            }
            let oracle = relative_speed2(&velocity(o), &velocity(b));
            let got = m.speed2(o, b);
            let ok = match roster.bodies[b].kind {
                BodyKind::Observer => {
                    obs_pairs += 1;
                    oracle < one
                }
                BodyKind::Photon => {
                    ph_pairs += 1;
                    oracle == one
                }
            };
            if !ok || got.as_ref() != Ok(&oracle) {
                mismatches.push(format!("observer {o}, body {b}: model {got:?}, oracle {oracle}"));
            }
        }
    }
    let report = check_noftl(&m);
    let elapsed = start.elapsed();
    let injected = Roster::parse(&format!("{ROSTER_SEED0}observer anchor(1,2,3,4) velocity(4/3,0,0)\n")).unwrap();
    let negative = check_noftl(&StandardModel::new(injected));
    let pass = observers.len() == 20
        && photons.len() == 10
        && obs_pairs == 380
        && ph_pairs == 200
        && mismatches.is_empty()
        && report.observer_pairs == 380
        && report.photon_pairs == 200
        && report.passed()
        && negative.violations.len() == 1
        && elapsed < Duration::from_secs(10);
    Check {
        pass,
        summary: format!(
            "{obs_pairs} observer pairs speed^2 < 1, {ph_pairs} photon pairs speed^2 = 1, {} oracle mismatches, {} violations; injected superluminal body: {} violation; {} (< 10 s)",
            mismatches.len(),
            report.violations.len(),
            negative.violations.len(),
            secs(elapsed)
        ),
        report: json!({
            "oracle_mismatches": mismatches,
            "noftl": report,
            "injected": negative,
        }),
    }
}

fn axiom_instances() -> Check {
    let th = specrel_theory();
    let m = StandardModel::new(default_roster());
    let mut reports = Vec::new();
    for label in INSTANCE_AXIOMS {
        let ax = &th.axiom(label).expect("shipped axiom").formula;
        reports.push(check_axiom_instances(&m, ax, label, 100, 0).expect("sampler exists"));
    }
    reports.push(check_field_laws(&m, &th.axiom("AxField").expect("AxField").formula, 1000, 0));
    let pass = reports.iter().all(|r| r.all_passed())
        && reports[..4].iter().all(|r| r.samples == 100)
        && reports[4].samples == 1000;
    let parts: Vec<String> = reports.iter().map(|r| format!("{} {}/{}", r.axiom, r.passed, r.samples)).collect();
    Check { pass, summary: format!("seed 0: {}", parts.join(", ")), report: json!(reports) }
}

/// Two sorts with the SpecRel symbols plus constants, so that closed
/// atoms exist at every depth.
fn round_trip_signature() -> Signature {
    let (b, q) = (Sort::new("B"), Sort::new("Q"));
    let mut sig = Signature::new();
    sig.add_sort(b.clone()).unwrap();
    sig.add_sort(q.clone()).unwrap();
    sig.add_function("add", vec![q.clone(), q.clone()], q.clone()).unwrap();
    sig.add_function("mul", vec![q.clone(), q.clone()], q.clone()).unwrap();
    sig.add_function("zero", vec![], q.clone()).unwrap();
    sig.add_function("origin", vec![], b.clone()).unwrap();
    sig.add_relation("lt", vec![q.clone(), q.clone()]).unwrap();
    sig.add_relation("IOb", vec![b.clone()]).unwrap();
    sig.add_relation("Ph", vec![b.clone()]).unwrap();
    sig.add_relation("W", vec![b.clone(), b, q.clone(), q.clone(), q.clone(), q]).unwrap();
    sig.add_relation("K", vec![]).unwrap();
    sig
}

fn round_trips() -> Check {
    let sig = round_trip_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = Vec::new();
    let total = 500;
    for i in 0..total {
        let f = random_formula(&sig, &mut rng, 4);
        let text = render(&f);
        match parse_formula(&text, &sig) {
            Ok(g) if alpha_equal(&f, &g) => {}
            _ => failures.push(format!("formula {i}: {text}")),
        }
    }
    let th = specrel0_theory();
    let problem = export_tptp(&th, Some(&noftl_formula()));
    let tptp = check_tptp(&problem);
    let tptp_ok = tptp.as_ref().is_ok_and(|s| s.conjectures == 1 && s.axioms >= th.len());
    let pass = failures.is_empty() && tptp_ok;
    Check {
        pass,
        summary: format!(
            "{}/{total} formulas round-trip; TPTP export of (SpecRel0, NoFTL) re-parses: {}",
            total - failures.len(),
            match &tptp {
                Ok(s) => format!("yes ({} axioms, {} conjecture)", s.axioms, s.conjectures),
                Err(e) => format!("no ({e})"),
            }
        ),
        report: json!({
            "formulas": total,
            "failures": failures,
            "tptp": tptp.as_ref().map(|s| json!({ "axioms": s.axioms, "conjectures": s.conjectures, "symbols": s.symbols.len() })).ok(),
            "tptp_bytes": problem.len(),
        }),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("SpecRel0 vs SpecRel", specrel_comparison),
        ("conjunction and pointlessness", kepler_boyle),
        ("preorder laws", preorder_laws),
        ("prover soundness", prover_soundness),
        ("model finder soundness", model_finder_soundness),
        ("NoFTL on the standard model", noftl_model_check),
        ("axiom instances", axiom_instances),
        ("parser round-trip", round_trips),
    ];
    let mut failed = 0;
    let mut first = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let c = run();
        println!("criterion {} [{}] {name}: {}", i + 1, if c.pass { "PASS" } else { "FAIL" }, c.summary);
        failed += usize::from(!c.pass);
        first.push(serde_json::to_string_pretty(&c.report).expect("report serializes"));
    }
    let mut differing = Vec::new();
    for (i, (_, run)) in criteria.iter().enumerate() {
        let again = serde_json::to_string_pretty(&run().report).expect("report serializes");
        if again != first[i] {
            differing.push((i + 1).to_string());
        }
    }
    let deterministic = differing.is_empty();
    println!(
        "criterion 9 [{}] determinism: {} of {} reports byte-identical on a second run{}",
        if deterministic { "PASS" } else { "FAIL" },
        criteria.len() - differing.len(),
        criteria.len(),
        if deterministic { String::new() } else { format!(" (differ: {})", differing.join(", ")) }
    );
    failed += usize::from(!deterministic);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
