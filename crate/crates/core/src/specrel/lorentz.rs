//! Exact Lorentz boosts over the rationals. Coordinates are ordered
//! `(x, y, z, t)` with metric `diag(1, 1, 1, -1)` and c = 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Vec3 = [Q; 3];
pub type Vec4 = [Q; 4];
pub type Mat4 = [[Q; 4]; 4];

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero3() -> Vec3 {
    [Q::zero(), Q::zero(), Q::zero()]
}

pub fn dot3(a: &Vec3, b: &Vec3) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn norm2(a: &Vec3) -> Q {
    dot3(a, a)
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

pub fn add4(a: &Vec4, b: &Vec4) -> Vec4 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2], &a[3] + &b[3]]
}

pub fn sub4(a: &Vec4, b: &Vec4) -> Vec4 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2], &a[3] - &b[3]]
}

pub fn scale4(s: &Q, a: &Vec4) -> Vec4 {
    [s * &a[0], s * &a[1], s * &a[2], s * &a[3]]
}

pub fn space(a: &Vec4) -> Vec3 {
    [a[0].clone(), a[1].clone(), a[2].clone()]
}

/// `|space|^2 - t^2`: negative for timelike, zero for lightlike.
pub fn interval(a: &Vec4) -> Q {
    norm2(&space(a)) - &a[3] * &a[3]
}

pub fn identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Q::one() } else { Q::zero() }))
}

pub fn mul_mv(m: &Mat4, v: &Vec4) -> Vec4 {
    std::array::from_fn(|i| (0..4).fold(Q::zero(), |acc, k| acc + &m[i][k] * &v[k]))
}

pub fn mul_mm(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j])))
}

/// True iff `m` preserves the Minkowski form: `m^T eta m = eta`.
pub fn preserves_metric(m: &Mat4) -> bool {
    let eta = |i: usize| if i == 3 { -Q::one() } else { Q::one() };
    (0..4).all(|i| {
        (0..4).all(|j| {
            let s = (0..4).fold(Q::zero(), |acc, k| acc + &m[k][i] * eta(k) * &m[k][j]);
            s == if i == j { eta(i) } else { Q::zero() }
        })
    })
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Q::new(rn, rd))
}

/// Lorentz factor `1 / sqrt(1 - |v|^2)`, when subluminal and rational.
pub fn gamma(v: &Vec3) -> Option<Q> {
    let one_minus = Q::one() - norm2(v);
    if !one_minus.is_positive() {
        return None;
    }
    sqrt_exact(&one_minus).map(|r| r.recip())
}

/// Pure boost into the rest frame of a body moving with velocity `v`:
/// `t' = g (t - v.x)`, `x' = x + ((g - 1)(v.x)/|v|^2 - g t) v`.
pub fn boost(v: &Vec3) -> Option<Mat4> {
    let g = gamma(v)?;
    let v2 = norm2(v);
    if v2.is_zero() {
        return Some(identity());
    }
    let k = (&g - Q::one()) / &v2;
    let mut m = identity();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += &k * &v[i] * &v[j];
        }
        m[i][3] = -(&g * &v[i]);
        m[3][i] = -(&g * &v[i]);
    }
    m[3][3] = g;
    Some(m)
}

/// Boost with rapidity parameter `r` (|r| < 1) along one axis: the
/// velocity `2r / (1 + r^2)` has the rational Lorentz factor
/// `(1 + r^2) / (1 - r^2)`.
pub fn axis_boost(axis: usize, r: &Q) -> Mat4 {
    let r2 = r * r;
    let g = (Q::one() + &r2) / (Q::one() - &r2);
    let gv = (r + r) / (Q::one() - &r2);
    let mut m = identity();
    m[axis][axis] = g.clone();
    m[3][3] = g;
    m[axis][3] = -gv.clone();
    m[3][axis] = -gv;
    m
}

/// Velocity of the worldline that `m` maps onto the time axis. Exists
/// whenever `m` is an orthochronous Lorentz transformation.
pub fn rest_velocity(m: &Mat4) -> Option<Vec3> {
    // The preimage of e_t under m is eta m^T eta e_t = (-m[3][0..3], m[3][3]).
    let t = &m[3][3];
    if t.is_zero() {
        return None;
    }
    Some([-&m[3][0] / t, -&m[3][1] / t, -&m[3][2] / t])
}

/// Rational point on the unit sphere: `(2a, 2b, 1 - a^2 - b^2) / (1 + a^2 + b^2)`.
pub fn unit_direction(a: &Q, b: &Q) -> Vec3 {
    let d = Q::one() + a * a + b * b;
    [(a + a) / &d, (b + b) / &d, (Q::one() - a * a - b * b) / &d]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_boosts_preserve_the_metric() {
        for (n, d) in [(1, 2), (-2, 3), (3, 7), (0, 1)] {
            for axis in 0..3 {
                assert!(preserves_metric(&axis_boost(axis, &q(n, d))));
            }
        }
    }

    #[test]
    fn composed_boost_velocity_has_rational_gamma() {
        let m = mul_mm(&mul_mm(&axis_boost(0, &q(1, 3)), &axis_boost(1, &q(-2, 5))), &axis_boost(2, &q(1, 4)));
        assert!(preserves_metric(&m));
        let v = rest_velocity(&m).unwrap();
        assert!(norm2(&v) < Q::one());
        let b = boost(&v).expect("rational Lorentz factor");
        assert!(preserves_metric(&b));
        // The observer's own direction maps to the time axis.
        let u: Vec4 = [v[0].clone(), v[1].clone(), v[2].clone(), Q::one()];
        let image = mul_mv(&b, &u);
        assert!(image[..3].iter().all(Zero::is_zero));
        assert!(image[3].is_positive());
    }

    #[test]
    fn superluminal_and_irrational_gammas_are_refused() {
        assert!(boost(&[q(2, 1), Q::zero(), Q::zero()]).is_none());
        assert!(boost(&[Q::one(), Q::zero(), Q::zero()]).is_none());
        // 1 - 1/4 = 3/4 is not a rational square.
        assert!(boost(&[q(1, 2), Q::zero(), Q::zero()]).is_none());
        assert!(boost(&[q(3, 5), Q::zero(), Q::zero()]).is_some());
    }

    #[test]
    fn unit_directions_are_unit() {
        for (a, b) in [(q(1, 2), q(1, 3)), (q(-4, 1), q(0, 1)), (q(7, 9), q(-5, 2))] {
            assert_eq!(norm2(&unit_direction(&a, &b)), Q::one());
        }
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&q(9, 16)), Some(q(3, 4)));
        assert_eq!(sqrt_exact(&q(2, 1)), None);
        assert_eq!(sqrt_exact(&q(-1, 1)), None);
    }
}
