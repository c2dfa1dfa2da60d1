use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::logic::Sort;
use crate::model::{EvalError, Structure};
use crate::parser::{ADD, LT, MUL};

use super::lorentz::{boost, interval, mul_mv, norm2, space, sub4, Mat4, Vec4, Q};
use super::roster::{BodyKind, Roster};

/// A roster over exact Minkowski spacetime. Observer `o` coordinatizes an
/// event `e` (reference coordinates) as `boost(v_o) (e - anchor_o)`.
#[derive(Clone, Debug)]
pub struct StandardModel {
    pub roster: Roster,
    /// Boost of each body that can serve as an observer; `None` for photons
    /// and for observers without a rational subluminal rest frame.
    boosts: Vec<Option<Mat4>>,
    /// Inverse boosts, paired with `boosts`.
    inverses: Vec<Option<Mat4>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpeedError {
    #[error("body {0} cannot coordinatize: not an observer with a rational subluminal rest frame")]
    NotACoordinatizer(usize),
    #[error("speed undefined: body {0} has no two events at distinct times in this frame")]
    Undefined(usize),
}

impl StandardModel {
    pub fn new(roster: Roster) -> Self {
        let boosts: Vec<Option<Mat4>> = roster
            .bodies
            .iter()
            .map(|b| match b.kind {
                BodyKind::Observer => boost(&b.worldline.velocity),
                BodyKind::Photon => None,
            })
            .collect();
        let inverses = roster
            .bodies
            .iter()
            .zip(&boosts)
            .map(|(b, m)| {
                m.as_ref().and_then(|_| {
                    let v = &b.worldline.velocity;
                    boost(&[-&v[0], -&v[1], -&v[2]])
                })
            })
            .collect();
        StandardModel { roster, boosts, inverses }
    }

    pub fn len(&self) -> usize {
        self.roster.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roster.bodies.is_empty()
    }

    pub fn kind(&self, b: usize) -> BodyKind {
        self.roster.bodies[b].kind
    }

    pub fn boost_of(&self, o: usize) -> Option<&Mat4> {
        self.boosts[o].as_ref()
    }

    /// Reference event -> coordinates of observer `o`.
    pub fn coordinates(&self, o: usize, e: &Vec4) -> Result<Vec4, SpeedError> {
        let m = self.boosts[o].as_ref().ok_or(SpeedError::NotACoordinatizer(o))?;
        Ok(mul_mv(m, &sub4(e, &self.roster.bodies[o].worldline.anchor)))
    }

    /// Coordinates of observer `o` -> reference event.
    pub fn event_at(&self, o: usize, x: &Vec4) -> Result<Vec4, SpeedError> {
        let m = self.inverses[o].as_ref().ok_or(SpeedError::NotACoordinatizer(o))?;
        let e = mul_mv(m, x);
        Ok(super::lorentz::add4(&e, &self.roster.bodies[o].worldline.anchor))
    }

    /// `W(o, b, x)`: observer `o` sees body `b` at coordinates `x`.
    pub fn sees(&self, o: usize, b: usize, x: &Vec4) -> bool {
        match self.event_at(o, x) {
            Ok(e) => self.roster.bodies[b].worldline.contains(&e),
            Err(_) => false,
        }
    }

    /// Squared speed of body `b` in the frame of observer `o`.
    pub fn speed2(&self, o: usize, b: usize) -> Result<Q, SpeedError> {
        let m = self.boosts[o].as_ref().ok_or(SpeedError::NotACoordinatizer(o))?;
        let v = &self.roster.bodies[b].worldline.velocity;
        let d = mul_mv(m, &[v[0].clone(), v[1].clone(), v[2].clone(), Q::one()]);
        if d[3].is_zero() {
            return Err(SpeedError::Undefined(b));
        }
        Ok(norm2(&space(&d)) / (&d[3] * &d[3]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub body: usize,
    pub kind: BodyKind,
    /// Failed comparisons attributed to this body.
    pub count: usize,
    /// First failure, as text.
    pub example: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoftlReport {
    pub observers: usize,
    pub photons: usize,
    /// Ordered pairs of distinct observers checked for speed^2 < 1.
    pub observer_pairs: usize,
    /// (observer, photon) pairs checked for speed^2 = 1.
    pub photon_pairs: usize,
    /// (observer, observer, photon) triples checked for the NoFTL inequality.
    pub triples: usize,
    /// Aggregated per offending body, in body order.
    pub violations: Vec<Violation>,
}

impl NoftlReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact instance check of NoFTL: for every observer `o`, every other
/// observer `o'` and every photon `p`, `speed_o(o')^2 < 1 = speed_o(p)^2`.
pub fn check_noftl(m: &StandardModel) -> NoftlReport {
    let observers = m.roster.ids(BodyKind::Observer);
    let photons = m.roster.ids(BodyKind::Photon);
    let mut violations: BTreeMap<usize, Violation> = BTreeMap::new();
    let mut blame = |body: usize, text: String| {
        violations
            .entry(body)
            .or_insert_with(|| Violation { body, kind: m.kind(body), count: 0, example: text })
            .count += 1;
    };
    let (mut observer_pairs, mut photon_pairs, mut triples) = (0, 0, 0);
    for &o in &observers {
        let mut photon_speeds = Vec::new();
        for &p in &photons {
            photon_pairs += 1;
            match m.speed2(o, p) {
                Ok(s) if s == Q::one() => photon_speeds.push(s),
                Ok(s) => {
                    blame(p, format!("speed_{o}({p})^2 = {} != 1", fmt_q(&s)));
                    photon_speeds.push(s);
                }
                Err(SpeedError::NotACoordinatizer(_)) => blame(o, format!("body {o} has no rest frame")),
                Err(e) => blame(p, e.to_string()),
            }
        }
        for &o2 in observers.iter().filter(|&&x| x != o) {
            observer_pairs += 1;
            match m.speed2(o, o2) {
                Ok(s) => {
                    if s >= Q::one() {
                        blame(o2, format!("speed_{o}({o2})^2 = {} >= 1", fmt_q(&s)));
                    }
                    for sp in &photon_speeds {
                        triples += 1;
                        if s >= *sp {
                            blame(o2, format!("speed_{o}({o2})^2 = {} not below a photon's {}", fmt_q(&s), fmt_q(sp)));
                        }
                    }
                }
                Err(SpeedError::NotACoordinatizer(_)) => blame(o, format!("body {o} has no rest frame")),
                Err(e) => blame(o2, e.to_string()),
            }
        }
    }
    NoftlReport {
        observers: observers.len(),
        photons: photons.len(),
        observer_pairs,
        photon_pairs,
        triples,
        violations: violations.into_values().collect(),
    }
}

/// Element of the standard model: a roster body or an exact quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Body(usize),
    Num(Q),
}

impl Value {
    pub fn num(&self) -> Option<&Q> {
        match self {
            Value::Num(x) => Some(x),
            Value::Body(_) => None,
        }
    }
}

/// Sort names of the case-study signature.
pub const QUANTITY: &str = "Q";
pub const BODY: &str = "B";

impl Structure for StandardModel {
    type Elem = Value;

    /// Bodies are the roster; quantities are not enumerable.
    fn domain(&self, sort: &Sort) -> Option<Vec<Value>> {
        (sort.name() == BODY).then(|| (0..self.len()).map(Value::Body).collect())
    }

    fn apply(&self, f: &str, args: &[Value]) -> Result<Value, EvalError> {
        match (f, args) {
            (ADD, [Value::Num(a), Value::Num(b)]) => Ok(Value::Num(a + b)),
            (MUL, [Value::Num(a), Value::Num(b)]) => Ok(Value::Num(a * b)),
            _ => Err(EvalError::UnknownSymbol(f.to_string())),
        }
    }

    fn holds(&self, r: &str, args: &[Value]) -> Result<bool, EvalError> {
        match (r, args) {
            (LT, [Value::Num(a), Value::Num(b)]) => Ok(a < b),
            ("IOb", [Value::Body(b)]) => Ok(self.kind(*b) == BodyKind::Observer),
            ("Ph", [Value::Body(b)]) => Ok(self.kind(*b) == BodyKind::Photon),
            ("W", [Value::Body(o), Value::Body(b), rest @ ..]) if rest.len() == 4 => {
                let coords: Option<Vec<Q>> = rest.iter().map(|v| v.num().cloned()).collect();
                let coords = coords.ok_or_else(|| EvalError::UnknownSymbol(r.to_string()))?;
                let x: Vec4 = coords.try_into().expect("four coordinates");
                Ok(self.kind(*o) == BodyKind::Observer && self.sees(*o, *b, &x))
            }
            _ => Err(EvalError::UnknownSymbol(r.to_string())),
        }
    }
}

/// True iff the separation between two coordinate points is lightlike.
pub fn lightlike(a: &Vec4, b: &Vec4) -> bool {
    interval(&sub4(b, a)).is_zero()
}
