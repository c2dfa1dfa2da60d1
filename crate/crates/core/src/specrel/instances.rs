use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::logic::{split_formula, Formula};
use crate::model::{evaluate, Env};

use super::lorentz::{add4, cross, dot3, norm2, space, sub3, sub4, Vec4, Q};
use super::roster::{random_event, random_q, BodyKind};
use super::standard::{StandardModel, Value};

/// Axioms whose instances [`check_axiom_instances`] can sample.
pub const INSTANCE_AXIOMS: [&str; 4] = ["AxSelf", "AxPh", "AxEv", "AxSymd"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("no instance sampler for axiom `{0}` (expected one of AxSelf, AxPh, AxEv, AxSymd)")]
    UnknownAxiom(String),
    #[error("the roster has no observer")]
    NoObservers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub axiom: String,
    pub seed: u64,
    pub samples: usize,
    /// Instances whose direct computation came out true.
    pub passed: usize,
    /// Instances where evaluating the instantiated formula agreed with the
    /// direct computation.
    pub agreements: usize,
    /// Up to five failing instances, as text.
    pub failures: Vec<String>,
}

impl InstanceReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.samples && self.agreements == self.samples
    }
}

/// One sampled instance: values for the stripped quantifiers and the
/// verdict of the direct computation.
struct Instance {
    bindings: BTreeMap<&'static str, Value>,
    direct: bool,
}

/// Drops every quantifier whose variable is bound, recording its value in
/// `env`; the remaining quantifiers range over roster bodies.
fn instantiate(f: &Formula, bindings: &BTreeMap<&'static str, Value>, env: &mut Env<Value>) -> Formula {
    match f {
        Formula::Quant(q, v, body) => match bindings.get(&*v.name) {
            Some(val) => {
                env.insert(v.clone(), val.clone());
                instantiate(body, bindings, env)
            }
            None => Formula::Quant(*q, v.clone(), Box::new(instantiate(body, bindings, env))),
        },
        Formula::Not(g) => Formula::not(instantiate(g, bindings, env)),
        Formula::Binary(c, a, b) => {
            Formula::Binary(*c, Box::new(instantiate(a, bindings, env)), Box::new(instantiate(b, bindings, env)))
        }
        other => other.clone(),
    }
}

fn describe(bindings: &BTreeMap<&'static str, Value>) -> String {
    let parts: Vec<String> = bindings
        .iter()
        .map(|(k, v)| match v {
            Value::Body(b) => format!("{k}=#{b}"),
            Value::Num(x) => format!("{k}={x}"),
        })
        .collect();
    parts.join(" ")
}

fn num(x: &Q) -> Value {
    Value::Num(x.clone())
}

fn bind_coords(out: &mut BTreeMap<&'static str, Value>, names: [&'static str; 4], x: &Vec4) {
    for (n, c) in names.iter().zip(x) {
        out.insert(n, num(c));
    }
}

fn run(
    axiom: &str,
    formula: &Formula,
    m: &StandardModel,
    seed: u64,
    instances: impl Iterator<Item = Instance>,
) -> InstanceReport {
    let mut report =
        InstanceReport { axiom: axiom.to_string(), seed, samples: 0, passed: 0, agreements: 0, failures: Vec::new() };
    for inst in instances {
        report.samples += 1;
        let mut env = Env::new();
        let core = instantiate(formula, &inst.bindings, &mut env);
        let via_formula = evaluate(m, &core, &env);
        if inst.direct {
            report.passed += 1;
        }
        if via_formula.as_ref() == Ok(&inst.direct) {
            report.agreements += 1;
        }
        if (!inst.direct || via_formula != Ok(true)) && report.failures.len() < 5 {
            let formula_side = match via_formula {
                Ok(b) => b.to_string(),
                Err(e) => e.to_string(),
            };
            report.failures.push(format!(
                "{}: direct {}, formula {formula_side}",
                describe(&inst.bindings),
                inst.direct
            ));
        }
    }
    report
}

/// A point on some roster worldline, in `o`'s coordinates.
fn roster_point(m: &StandardModel, o: usize, rng: &mut ChaCha8Rng) -> Option<Vec4> {
    let b = rng.gen_range(0..m.len());
    let e = m.roster.bodies[b].worldline.event(&random_q(rng, 5));
    m.coordinates(o, &e).ok()
}

/// Samples `samples` instances of `axiom` in the standard model, choosing
/// observers round-robin and coordinates from `seed`. Each instance is
/// decided twice: by direct computation and by evaluating the axiom with
/// its quantifiers instantiated.
pub fn check_axiom_instances(
    m: &StandardModel,
    axiom: &Formula,
    label: &str,
    samples: usize,
    seed: u64,
) -> Result<InstanceReport, InstanceError> {
    if !INSTANCE_AXIOMS.contains(&label) {
        return Err(InstanceError::UnknownAxiom(label.to_string()));
    }
    let observers = m.roster.ids(BodyKind::Observer);
    if observers.is_empty() {
        return Err(InstanceError::NoObservers);
    }
    let photons = m.roster.ids(BodyKind::Photon);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = (0..samples).map(|i| {
        let o = observers[i % observers.len()];
        let mut b: BTreeMap<&'static str, Value> = BTreeMap::new();
        b.insert("o", Value::Body(o));
        let direct = match label {
            "AxSelf" => {
                let x = match i % 3 {
                    0 => [Q::zero(), Q::zero(), Q::zero(), random_q(&mut rng, 5)],
                    1 => random_event(&mut rng),
                    _ => roster_point(m, o, &mut rng).unwrap_or_else(|| random_event(&mut rng)),
                };
                bind_coords(&mut b, ["x", "y", "z", "t"], &x);
                m.sees(o, o, &x) == x[..3].iter().all(Zero::is_zero)
            }
            "AxPh" => {
                let (x, d) = match (i % 2, photons.is_empty()) {
                    (0, false) => {
                        let p = &m.roster.bodies[photons[rng.gen_range(0..photons.len())]].worldline;
                        let e1 = p.event(&random_q(&mut rng, 5));
                        let e2 = p.event(&random_q(&mut rng, 5));
                        match (m.coordinates(o, &e1), m.coordinates(o, &e2)) {
                            (Ok(a), Ok(c)) => {
                                let d = sub4(&c, &a);
                                (a, d)
                            }
                            _ => (random_event(&mut rng), random_event(&mut rng)),
                        }
                    }
                    _ => {
                        // Not lightlike: only roster photons carry light signals.
                        let x = random_event(&mut rng);
                        let mut d = random_event(&mut rng);
                        while norm2(&space(&d)) == &d[3] * &d[3] {
                            d = random_event(&mut rng);
                        }
                        (x, d)
                    }
                };
                bind_coords(&mut b, ["x", "y", "z", "t"], &x);
                bind_coords(&mut b, ["dx", "dy", "dz", "dt"], &d);
                let y = add4(&x, &d);
                let lhs = photons.iter().any(|&p| m.sees(o, p, &x) && m.sees(o, p, &y));
                lhs == (norm2(&space(&d)) == &d[3] * &d[3])
            }
            "AxEv" => {
                let o2 = observers[rng.gen_range(0..observers.len())];
                b.insert("o'", Value::Body(o2));
                let x = if i % 2 == 0 {
                    roster_point(m, o, &mut rng).unwrap_or_else(|| random_event(&mut rng))
                } else {
                    random_event(&mut rng)
                };
                let y = m.event_at(o, &x).and_then(|e| m.coordinates(o2, &e));
                bind_coords(&mut b, ["x", "y", "z", "t"], &x);
                match y {
                    Ok(y) => {
                        bind_coords(&mut b, ["x'", "y'", "z'", "t'"], &y);
                        (0..m.len()).all(|body| m.sees(o, body, &x) == m.sees(o2, body, &y))
                    }
                    Err(_) => {
                        bind_coords(&mut b, ["x'", "y'", "z'", "t'"], &x);
                        false
                    }
                }
            }
            _ => symd_instance(m, o, &observers, &mut rng, &mut b),
        };
        Instance { bindings: b, direct }
    });
    Ok(run(label, axiom, m, seed, instances))
}

/// AxSymd: two events simultaneous for both `o` and `o'`. A reference
/// displacement orthogonal to the relative velocity and with time part
/// `v_o . dx` has zero time component in both frames.
fn symd_instance(
    m: &StandardModel,
    o: usize,
    observers: &[usize],
    rng: &mut ChaCha8Rng,
    b: &mut BTreeMap<&'static str, Value>,
) -> bool {
    let o2 = observers[rng.gen_range(0..observers.len())];
    b.insert("o'", Value::Body(o2));
    let v1 = &m.roster.bodies[o].worldline.velocity;
    let v2 = &m.roster.bodies[o2].worldline.velocity;
    let r = [random_q(rng, 3), random_q(rng, 3), random_q(rng, 3)];
    let rel = sub3(v1, v2);
    let mut dx = cross(&rel, &r);
    if norm2(&rel).is_zero() {
        dx = r;
    }
    let dt = dot3(v1, &dx);
    let [a, c, e] = dx;
    let delta: Vec4 = [a, c, e, dt];
    let base = m.roster.bodies[rng.gen_range(0..m.len())].worldline.event(&random_q(rng, 5));
    let far = add4(&base, &delta);
    let coords = |obs: usize, ev: &Vec4| m.coordinates(obs, ev);
    let (Ok(x1), Ok(x2), Ok(u1), Ok(u2)) = (coords(o, &base), coords(o, &far), coords(o2, &base), coords(o2, &far))
    else {
        let z = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
        bind_coords(b, ["x", "y", "z", "t"], &z);
        bind_coords(b, ["u", "v", "w", "s"], &z);
        for n in ["dx", "dy", "dz", "du", "dv", "dw"] {
            b.insert(n, num(&Q::one()));
        }
        return false;
    };
    let d = sub4(&x2, &x1);
    let du = sub4(&u2, &u1);
    bind_coords(b, ["x", "y", "z", "t"], &x1);
    bind_coords(b, ["u", "v", "w", "s"], &u1);
    for (n, val) in ["dx", "dy", "dz"].into_iter().zip(&d) {
        b.insert(n, num(val));
    }
    for (n, val) in ["du", "dv", "dw"].into_iter().zip(&du) {
        b.insert(n, num(val));
    }
    let same_events = |p: &Vec4, q: &Vec4| (0..m.len()).all(|body| m.sees(o, body, p) == m.sees(o2, body, q));
    // Both events are shared by construction, so a false antecedent is a sampler fault.
    let simultaneous = d[3].is_zero() && du[3].is_zero();
    let antecedent = same_events(&x1, &u1) && same_events(&add4(&x1, &d), &add4(&u1, &du));
    simultaneous && antecedent && norm2(&space(&d)) == norm2(&space(&du))
}

/// The fourteen conjuncts of AxField on `samples` rational triples, with
/// the existential witnesses (zero, one, negatives, inverses) supplied.
/// Each conjunct is also evaluated with its quantifiers instantiated.
pub fn check_field_laws(m: &StandardModel, ax_field: &Formula, samples: usize, seed: u64) -> InstanceReport {
    let laws = split_formula(ax_field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InstanceReport {
        axiom: "AxField".to_string(),
        seed,
        samples: 0,
        passed: 0,
        agreements: 0,
        failures: Vec::new(),
    };
    for i in 0..samples {
        let (a, b, c) = (random_q(&mut rng, 10), random_q(&mut rng, 10), random_q(&mut rng, 10));
        let mut all_direct = true;
        let mut all_agree = true;
        for (k, law) in laws.iter().enumerate() {
            let (bindings, direct) = field_instance(k, &a, &b, &c, i % 2 == 0);
            let mut env = Env::new();
            let core = instantiate(law, &bindings, &mut env);
            let via = evaluate(m, &core, &env);
            all_direct &= direct;
            all_agree &= via == Ok(direct);
            if (!direct || via != Ok(true)) && report.failures.len() < 5 {
                report.failures.push(format!("law {}: {}", k + 1, describe(&bindings)));
            }
        }
        report.samples += 1;
        report.passed += usize::from(all_direct && laws.len() == 14);
        report.agreements += usize::from(all_agree);
    }
    report
}

fn field_instance(k: usize, a: &Q, b: &Q, c: &Q, flip: bool) -> (BTreeMap<&'static str, Value>, bool) {
    let zero = Q::zero();
    let one = Q::one();
    let mut v: BTreeMap<&'static str, Q> = [("a", a.clone()), ("b", b.clone()), ("c", c.clone())].into();
    let direct = match k {
        0 => (a + b) + c == a + (b + c),
        1 => a + b == b + a,
        2 => {
            v.insert("e", zero.clone());
            a + &zero == *a
        }
        3 => {
            let e = if flip { zero.clone() } else { c.clone() };
            let w = &e - a;
            let ok = &e + &e != e || a + &w == e;
            v.insert("e", e);
            v.insert("b", w);
            ok
        }
        4 => (a * b) * c == a * (b * c),
        5 => a * b == b * a,
        6 => {
            v.insert("u", one.clone());
            &one + &one != one && a * &one == *a
        }
        7 => {
            let u = if flip { one.clone() } else { c.clone() };
            let w = if a.is_zero() { zero.clone() } else { &u / a };
            let ok = !(a + a != *a && c * &u == *c) || a * &w == u;
            v.insert("u", u);
            v.insert("b", w);
            ok
        }
        8 => a * (b + c) == a * b + a * c,
        9 => !a.lt(a),
        10 => !(a < b && b < c) || a < c,
        11 => a.lt(b) || a == b || b.lt(a),
        12 => !(a < b) || a + c < b + c,
        _ => {
            let e = if flip { zero.clone() } else { c.clone() };
            let ok = !(&e + &e == e && &e < a && &e < b) || e < a * b;
            v.insert("e", e);
            ok
        }
    };
    (v.into_iter().map(|(k, x)| (k, Value::Num(x))).collect(), direct)
}
