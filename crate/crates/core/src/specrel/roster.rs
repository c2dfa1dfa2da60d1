use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::lorentz::{axis_boost, mul_mm, q, rest_velocity, unit_direction, Vec3, Vec4, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Observer,
    Photon,
}

/// A straight worldline `anchor + s * (velocity, 1)` in reference coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Worldline {
    pub anchor: Vec4,
    pub velocity: Vec3,
}

impl Worldline {
    pub fn event(&self, s: &Q) -> Vec4 {
        let v = &self.velocity;
        let a = &self.anchor;
        [&a[0] + s * &v[0], &a[1] + s * &v[1], &a[2] + s * &v[2], &a[3] + s]
    }

    pub fn contains(&self, e: &Vec4) -> bool {
        let s = &e[3] - &self.anchor[3];
        self.event(&s) == *e
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Body {
    pub kind: BodyKind,
    pub worldline: Worldline,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RosterError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n.trim().parse().ok()?;
    let d: num_bigint::BigInt = d.trim().parse().ok()?;
    (d != num_bigint::BigInt::from(0)).then(|| Q::new(n, d))
}

fn parse_tuple<const N: usize>(text: &str, head: &str) -> Option<[Q; N]> {
    let inner = text.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<Q> = inner.split(',').map(parse_q).collect::<Option<_>>()?;
    parts.try_into().ok()
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BodyKind::Observer => "observer",
            BodyKind::Photon => "photon",
        };
        let a: Vec<String> = self.worldline.anchor.iter().map(fmt_q).collect();
        let v: Vec<String> = self.worldline.velocity.iter().map(fmt_q).collect();
        write!(f, "{kind} anchor({}) velocity({})", a.join(","), v.join(","))
    }
}

/// Bodies in file order; a body's id is its index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Roster {
    pub bodies: Vec<Body>,
}

impl Roster {
    /// One body per line: `observer|photon anchor(x,y,z,t) velocity(vx,vy,vz)`,
    /// rationals written `p/q`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Roster, RosterError> {
        let mut bodies = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| RosterError::Syntax { line: i + 1, message: m.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kind, anchor, velocity] = fields[..] else {
                return Err(err("expected `KIND anchor(x,y,z,t) velocity(vx,vy,vz)`"));
            };
            let kind = match kind {
                "observer" => BodyKind::Observer,
                "photon" => BodyKind::Photon,
                _ => return Err(err("body kind must be `observer` or `photon`")),
            };
            let anchor = parse_tuple::<4>(anchor, "anchor").ok_or_else(|| err("malformed anchor"))?;
            let velocity = parse_tuple::<3>(velocity, "velocity").ok_or_else(|| err("malformed velocity"))?;
            bodies.push(Body { kind, worldline: Worldline { anchor, velocity } });
        }
        Ok(Roster { bodies })
    }

    pub fn to_text(&self) -> String {
        self.bodies.iter().map(|b| format!("{b}\n")).collect()
    }

    pub fn ids(&self, kind: BodyKind) -> Vec<usize> {
        (0..self.bodies.len()).filter(|&i| self.bodies[i].kind == kind).collect()
    }

    /// Seeded roster: observers moving with velocities obtained by composing
    /// three axis boosts with rational parameters (so every Lorentz factor is
    /// rational), photons moving along rational unit directions.
    pub fn generate(seed: u64, observers: usize, photons: usize) -> Roster {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bodies = Vec::new();
        for _ in 0..observers {
            let anchor = random_event(&mut rng);
            let mut m = axis_boost(0, &small_param(&mut rng));
            for axis in 1..3 {
                m = mul_mm(&m, &axis_boost(axis, &small_param(&mut rng)));
            }
            let velocity = rest_velocity(&m).expect("orthochronous");
            bodies.push(Body { kind: BodyKind::Observer, worldline: Worldline { anchor, velocity } });
        }
        for _ in 0..photons {
            let anchor = random_event(&mut rng);
            let (a, b) = (random_q(&mut rng, 3), random_q(&mut rng, 3));
            let velocity = unit_direction(&a, &b);
            bodies.push(Body { kind: BodyKind::Photon, worldline: Worldline { anchor, velocity } });
        }
        Roster { bodies }
    }
}

/// A rational in `(-bound, bound)` with denominator at most 9.
pub(crate) fn random_q<R: Rng>(rng: &mut R, bound: i64) -> Q {
    let d = rng.gen_range(1..=9);
    let n = rng.gen_range(-(bound * d - 1)..=(bound * d - 1));
    q(n, d)
}

/// Boost parameter strictly inside (-1, 1), denominator between 2 and 9.
fn small_param<R: Rng>(rng: &mut R) -> Q {
    let d = rng.gen_range(2..=9);
    q(rng.gen_range(-(d - 1)..=(d - 1)), d)
}

pub(crate) fn random_event<R: Rng>(rng: &mut R) -> Vec4 {
    std::array::from_fn(|_| random_q(rng, 5))
}
