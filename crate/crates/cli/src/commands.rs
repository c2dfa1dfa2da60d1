use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use whyq::answers::{
    compare, is_acceptable, is_pointless, is_possible, ComparisonReport, Evidence, Registry, ThreeValued, Truth,
    VerdictReport, WhyQuestion,
};
use whyq::logic::juxtapose;
use whyq::model::{countermodel, DomainAssignment, ModelOutcome};
use whyq::parser::tptp::{check_tptp, export_tptp};
use whyq::parser::{parse_theory_in, render, render_theory};
use whyq::prover::{entails, Outcome, UnknownReason};
use whyq::specrel::{
    check_axiom_instances, check_field_laws, check_noftl, default_roster, specrel_theory, InstanceReport, Roster,
    StandardModel, INSTANCE_AXIOMS,
};
use whyq::{NamedFormula, Theory};

use crate::args::{CheckArg, Cli, Command, Global, ModelArg};
use crate::load::{lift_to, load, Goal};
use crate::{Exit, Failure};

pub fn run(cli: &Cli) -> Result<Exit, Failure> {
    let g = &cli.global;
    let mut reg = Registry::open(&g.registry).map_err(|e| Failure::Usage(e.to_string()))?;
    match &cli.command {
        Command::CheckPossible { theory, question } => check(g, &mut reg, theory, question, false),
        Command::CheckAcceptable { theory, question } => check(g, &mut reg, theory, question, true),
        Command::Compare { left, right, mode } => compare_cmd(g, &mut reg, left, right, &mode.modes()),
        Command::Pointless { theory, question, candidates } => pointless(g, &mut reg, theory, question, candidates.as_deref()),
        Command::Prove { theory, goal } => prove(g, &mut reg, theory, goal),
        Command::Countermodel { theory, goal, max } => counter(g, &mut reg, theory, goal, *max),
        Command::ExportTptp { theory, goal, out } => export(&mut reg, theory, goal.as_deref(), out.as_deref()),
        Command::Juxtapose { first, second } => juxtapose_cmd(g, &mut reg, first, second),
        Command::EvalModel { model: ModelArg::Minkowski, check, samples, field_samples, roster } => {
            eval_model(g, *check, *samples, *field_samples, roster.as_deref())
        }
    }
}

fn exit_for(t: Truth) -> Exit {
    match t {
        Truth::Yes => Exit::Yes,
        Truth::No => Exit::No,
        Truth::Unknown => Exit::Unknown,
    }
}

fn internal(e: impl ToString) -> Failure {
    Failure::Internal(e.to_string())
}

/// Files the artifacts of `v` and returns its report form.
fn file_verdict(reg: &Registry, v: &ThreeValued) -> Result<VerdictReport, Failure> {
    let mut failure = None;
    let report = VerdictReport::new(v, &mut |e| match reg.store_evidence(e) {
        Ok(path) => path,
        Err(err) => {
            failure.get_or_insert(err);
            None
        }
    });
    match failure {
        Some(err) => Err(internal(err)),
        None => Ok(report),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn print_verdict(label: &str, v: &VerdictReport) {
    println!("{label}: {}", v.value);
    for e in &v.evidence {
        match &e.path {
            Some(p) => println!("  {}: {} [{p}]", e.kind, e.subject),
            None => println!("  {}: {}", e.kind, e.subject),
        }
    }
}

/// A decided verdict whose evidence does not re-check is a bug.
fn rechecked(v: &ThreeValued) -> Result<(), Failure> {
    if v.truth != Truth::Unknown && !v.recheck() {
        return Err(internal("evidence failed re-checking"));
    }
    Ok(())
}

fn question(goal: &Goal) -> Result<WhyQuestion, Failure> {
    WhyQuestion::new(goal.formula.clone(), goal.signature.clone()).map_err(|e| Failure::Usage(e.to_string()))
}

fn shell_quote(s: &str) -> String {
    if s.chars().all(|c| c.is_ascii_alphanumeric() || "_-./".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

fn check(g: &Global, reg: &mut Registry, theory: &str, q: &str, acceptable: bool) -> Result<Exit, Failure> {
    let loaded = load(reg, theory, "answer", &[q])?;
    let raw = q;
    let q = question(&loaded.goals[0])?;
    let limits = g.limits();
    let v = if acceptable { is_acceptable(&loaded.theory, &q, &limits) } else { is_possible(&loaded.theory, &q, &limits) }
        .map_err(|e| Failure::Usage(e.to_string()))?;
    rechecked(&v)?;
    let report = file_verdict(reg, &v)?;
    let what = if acceptable { "acceptable" } else { "possible" };
    let hint = (acceptable && v.truth == Truth::Unknown).then(|| {
        format!(
            "entailment is open within the budget; an external prover may settle it: whyq export-tptp {} --goal {}",
            shell_quote(theory),
            shell_quote(raw)
        )
    });
    if g.json {
        let mut out = json!({ "theory": loaded.key, "question": render(&q.statement), what: report });
        if let Some(h) = &hint {
            out["hint"] = json!(h);
        }
        print_json(&out);
    } else {
        print_verdict(what, &report);
        if let Some(h) = hint {
            println!("hint: {h}");
        }
    }
    Ok(exit_for(v.truth))
}

fn compare_cmd(g: &Global, reg: &mut Registry, left: &str, right: &str, modes: &[whyq::answers::Mode]) -> Result<Exit, Failure> {
    let l = load(reg, left, "left", &[])?.key;
    let r = load(reg, right, "right", &[])?.key;
    let report = compare(&l, &r, reg, modes, &g.limits()).map_err(|e| match e {
        whyq::answers::AnswerError::Registry(e @ whyq::answers::RegistryError::Io { .. }) => internal(e),
        other => Failure::Usage(other.to_string()),
    })?;
    if g.json {
        println!("{}", report.to_json());
    } else {
        print_comparison(&report);
    }
    Ok(Exit::Yes)
}

fn print_comparison(r: &ComparisonReport) {
    println!("left: {}", r.left);
    println!("right: {}", r.right);
    if r.signature_lifted {
        println!("signatures lifted to their union");
    }
    let legs = [
        ("left nonworse than right", &r.nonworse),
        ("left piecewise nonworse than right", &r.piecewise_nonworse),
        ("equivalent (nonworse)", &r.equivalent.nonworse),
        ("equivalent (piecewise)", &r.equivalent.piecewise),
        ("left better than right", &r.better.nonworse),
        ("left piecewise better than right", &r.better.piecewise),
    ];
    for (label, v) in legs {
        if let Some(v) = v {
            print_verdict(label, v);
        }
    }
    if !r.witnesses.is_empty() {
        println!("witnesses:");
        for w in &r.witnesses {
            let by = w.by.as_deref().unwrap_or("-");
            println!("  {} <- {by} ({})", w.axiom, serde_json::to_value(w.kind).expect("kind").as_str().unwrap_or(""));
        }
    }
}

fn load_candidates(dir: &Path) -> Result<Vec<Theory>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "why") && p.is_file())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            parse_theory_in(&text, &p.display().to_string()).map(|t| t.value).map_err(|e| Failure::Usage(e.to_string()))
        })
        .collect()
}

fn axiom_set(th: &Theory) -> String {
    let parts: Vec<String> = th.axioms().iter().map(|a| render(&a.formula)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn pointless(g: &Global, reg: &mut Registry, theory: &str, q: &str, dir: Option<&Path>) -> Result<Exit, Failure> {
    let loaded = load(reg, theory, "answer", &[q])?;
    let q = question(&loaded.goals[0])?;
    let candidates = match dir {
        Some(d) => load_candidates(d)?,
        None => Vec::new(),
    };
    let p = is_pointless(&loaded.theory, &q, &candidates, &g.limits()).map_err(|e| Failure::Usage(e.to_string()))?;
    rechecked(&p.verdict)?;
    let report = file_verdict(reg, &p.verdict)?;
    if g.json {
        let witness = p.witness.as_ref().map(|w| {
            let axioms: Vec<Value> = w.axioms().iter().map(|a| json!({ "label": a.label, "formula": render(&a.formula) })).collect();
            json!({ "name": w.name(), "axioms": axioms })
        });
        print_json(&json!({
            "theory": loaded.key,
            "question": render(&q.statement),
            "pointless": report,
            "witness": witness,
            "candidates": p.candidates,
        }));
    } else {
        print_verdict("pointless", &report);
        if let Some(w) = &p.witness {
            println!("witness: {} = {}", w.name(), axiom_set(w));
        }
        for c in &p.candidates {
            println!("  candidate {}: {} ({})", c.name, c.truth, c.detail);
        }
    }
    Ok(exit_for(p.verdict.truth))
}

fn reason_exit(reason: &UnknownReason) -> Exit {
    if reason.is_internal() {
        Exit::Internal
    } else {
        Exit::Unknown
    }
}

fn prove(g: &Global, reg: &mut Registry, theory: &str, goal: &str) -> Result<Exit, Failure> {
    let loaded = load(reg, theory, "theory", &[goal])?;
    let goal = &loaded.goals[0];
    let th = lift_to(&loaded.theory, goal)?;
    let v = entails(&th, &goal.formula, &g.limits().budget);
    let (exit, status, detail, path) = match v.outcome {
        Outcome::Proved(proof) => {
            let e = Evidence::Proof {
                signature: th.signature().clone(),
                premises: th.axioms().to_vec(),
                goal: Some(NamedFormula::new("goal", goal.formula.clone())),
                proof,
            };
            if !e.recheck() {
                return Err(internal("proof failed re-checking"));
            }
            let path = reg.store_evidence(&e).map_err(internal)?;
            (Exit::Yes, "proved", e.artifact().unwrap_or_default(), path)
        }
        Outcome::Unknown(reason) => (reason_exit(&reason), "unknown", reason.to_string(), None),
    };
    if g.json {
        let mut out = json!({
            "theory": loaded.key,
            "goal": render(&goal.formula),
            "status": status,
            "given": v.stats.given,
            "generated": v.stats.generated,
        });
        match &path {
            Some(p) => out["proof"] = json!(p),
            None => out["reason"] = json!(detail),
        }
        print_json(&out);
    } else {
        println!("{status}: {} |= {}", loaded.key, render(&goal.formula));
        match &path {
            Some(p) => {
                println!("proof written to {p}");
                print!("{detail}");
            }
            None => println!("  {detail}"),
        }
    }
    Ok(exit)
}

fn counter(g: &Global, reg: &mut Registry, theory: &str, goal: &str, max: Option<usize>) -> Result<Exit, Failure> {
    let loaded = load(reg, theory, "theory", &[goal])?;
    let goal = &loaded.goals[0];
    let th = lift_to(&loaded.theory, goal)?;
    let max = max.unwrap_or(g.max_domain);
    if max == 0 {
        return Err(Failure::Usage("--max must be positive".into()));
    }
    let found = countermodel(&th, &goal.formula, &DomainAssignment::uniform(th.signature(), max), &g.limits().budget);
    let (exit, status, detail, path, size) = match found {
        ModelOutcome::Found(model) => {
            let size = model.domains().total();
            let e = Evidence::Countermodel {
                premises: th.axioms().to_vec(),
                goal: NamedFormula::new("goal", goal.formula.clone()),
                model,
            };
            if !e.recheck() {
                return Err(internal("countermodel failed re-evaluation"));
            }
            let path = reg.store_evidence(&e).map_err(internal)?;
            (Exit::Yes, "found", e.artifact().unwrap_or_default(), path, Some(size))
        }
        ModelOutcome::NotFound => (Exit::Unknown, "unknown", UnknownReason::SizeBound.to_string(), None, None),
        ModelOutcome::Unknown(reason) => (reason_exit(&reason), "unknown", reason.to_string(), None, None),
    };
    if g.json {
        let mut out = json!({ "theory": loaded.key, "goal": render(&goal.formula), "status": status, "max_domain": max });
        match size {
            Some(n) => {
                out["total_size"] = json!(n);
                out["model"] = json!(path);
            }
            None => out["reason"] = json!(detail),
        }
        print_json(&out);
    } else {
        println!("{status}: countermodel to {} |= {}", loaded.key, render(&goal.formula));
        match size {
            Some(n) => {
                println!("total domain size {n}");
                if let Some(p) = &path {
                    println!("model written to {p}");
                }
                print!("{detail}");
            }
            None => println!("  {detail}"),
        }
    }
    Ok(exit)
}

fn export(reg: &mut Registry, theory: &str, goal: Option<&str>, out: Option<&Path>) -> Result<Exit, Failure> {
    let formulas: Vec<&str> = goal.into_iter().collect();
    let loaded = load(reg, theory, "theory", &formulas)?;
    let (th, conj) = match loaded.goals.first() {
        Some(goal) => (lift_to(&loaded.theory, goal)?, Some(&goal.formula)),
        None => (loaded.theory.clone(), None),
    };
    let text = export_tptp(&th, conj);
    let summary = check_tptp(&text).map_err(|e| internal(format!("exported problem does not re-parse: {e}")))?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(format!("{}.p", th.name())));
    fs::write(&path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    println!(
        "wrote {}: {} axioms, {} conjectures, {} symbols; re-parse ok",
        path.display(),
        summary.axioms,
        summary.conjectures,
        summary.symbols.len()
    );
    Ok(Exit::Yes)
}

fn juxtapose_cmd(g: &Global, reg: &mut Registry, first: &str, second: &str) -> Result<Exit, Failure> {
    let a = load(reg, first, "first", &[])?.theory;
    let b = load(reg, second, "second", &[])?.theory;
    let th = juxtapose(&a, &b).map_err(|e| Failure::Usage(e.to_string()))?;
    if g.json {
        let axioms: Vec<Value> = th.axioms().iter().map(|a| json!({ "label": a.label, "formula": render(&a.formula) })).collect();
        print_json(&json!({ "name": th.name(), "axioms": axioms }));
    } else {
        print!("{}", render_theory(&th));
    }
    Ok(Exit::Yes)
}

fn roster_for(g: &Global, path: Option<&Path>) -> Result<Roster, Failure> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Roster::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        None if g.seed == 0 => Ok(default_roster()),
        None => Ok(Roster::generate(g.seed, 20, 10)),
    }
}

fn eval_model(g: &Global, check: CheckArg, samples: usize, field_samples: usize, roster: Option<&Path>) -> Result<Exit, Failure> {
    let m = StandardModel::new(roster_for(g, roster)?);
    match check {
        CheckArg::Noftl => {
            let r = check_noftl(&m);
            if g.json {
                print_json(&serde_json::to_value(&r).expect("report serializes"));
            } else {
                println!(
                    "noftl: {} ({} observers, {} photons; {} observer pairs, {} photon pairs, {} triples)",
                    if r.passed() { "pass" } else { "fail" },
                    r.observers,
                    r.photons,
                    r.observer_pairs,
                    r.photon_pairs,
                    r.triples
                );
                for v in &r.violations {
                    println!("  violation: body {} ({} failed comparisons): {}", v.body, v.count, v.example);
                }
            }
            Ok(if r.passed() { Exit::Yes } else { Exit::No })
        }
        CheckArg::Axioms => {
            let th = specrel_theory();
            let formula = |label: &str| th.axiom(label).map(|a| a.formula.clone()).ok_or_else(|| internal(format!("missing {label}")));
            let mut reports: Vec<InstanceReport> = Vec::new();
            for label in INSTANCE_AXIOMS {
                reports.push(check_axiom_instances(&m, &formula(label)?, label, samples, g.seed).map_err(|e| Failure::Usage(e.to_string()))?);
            }
            reports.push(check_field_laws(&m, &formula("AxField")?, field_samples, g.seed));
            let ok = reports.iter().all(InstanceReport::all_passed);
            if g.json {
                print_json(&serde_json::to_value(&reports).expect("reports serialize"));
            } else {
                for r in &reports {
                    println!(
                        "{}: {} ({}/{} passed, {} agreements)",
                        r.axiom,
                        if r.all_passed() { "pass" } else { "fail" },
                        r.passed,
                        r.samples,
                        r.agreements
                    );
                    for f in &r.failures {
                        println!("  {f}");
                    }
                }
            }
            Ok(if ok { Exit::Yes } else { Exit::No })
        }
    }
}
