use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::tilings::Ambient;

/// Minkowski form x1y1 + x2y2 − x3y3 on the plane H = {x4 = 0}.
pub fn mink(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

/// Hyperbolic distance between two points of the hyperboloid x3 > 0.
pub fn h2_dist(p: &Vector3<f64>, q: &Vector3<f64>) -> f64 {
    let d = p - q;
    2.0 * (mink(&d, &d).max(0.0).sqrt() / 2.0).asinh()
}

/// Point of H² at distance r from (0,0,1) in the direction θ.
pub fn h2_polar(r: f64, theta: f64) -> Vector3<f64> {
    Vector3::new(r.sinh() * theta.cos(), r.sinh() * theta.sin(), r.cosh())
}

/// Rescale onto the hyperboloid x1² + x2² − x3² = −1, x3 > 0.
pub fn h2_normalize(p: &Vector3<f64>) -> Vector3<f64> {
    let q = (-mink(p, p)).sqrt();
    if p[2] < 0.0 {
        -p / q
    } else {
        p / q
    }
}

fn rotation(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Hyperbolic translation of length t along the geodesic through (0,0,1)
/// in the direction θ.
pub fn translation(theta: f64, t: f64) -> Matrix3<f64> {
    let (s, c) = (t.sinh(), t.cosh());
    let b = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c);
    rotation(theta) * b * rotation(-theta)
}

/// Cocompact group of isometries of H = AdS₃ ∩ {x4 = 0}, given by
/// generators acting on (x1, x2, x3) and fixing x4.
#[derive(Clone, Debug)]
pub struct FuchsianGroup {
    pub genus: usize,
    pub generators: Vec<Matrix3<f64>>,
    /// Vertices of a fundamental polygon, counter-clockwise.
    pub domain: Vec<Vector3<f64>>,
    /// Generator indices (sign = inverse) whose product is the identity.
    pub relation: Vec<i32>,
}

/// Side-pairing group of the regular octagon with angles π/4: opposite
/// sides are paired by translations along the four axes through the
/// midpoints of the sides.
pub fn genus2_group() -> FuchsianGroup {
    // Inradius r with cosh r = cot(π/8), circumradius R with cosh R = cot²(π/8).
    let cot = 1.0 / (PI / 8.0).tan();
    let r = cot.acosh();
    let big_r = (cot * cot).acosh();
    let generators = (0..4).map(|k| translation(k as f64 * PI / 4.0, 2.0 * r)).collect();
    let domain = (0..8).map(|k| h2_polar(big_r, PI / 8.0 + k as f64 * PI / 4.0)).collect();
    FuchsianGroup { genus: 2, generators, domain, relation: vec![1, -2, 3, -4, -1, 2, -3, 4] }
}

impl FuchsianGroup {
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Area of the quotient surface, −2πχ.
    pub fn area(&self) -> f64 {
        -2.0 * PI * self.euler_characteristic() as f64
    }

    pub fn generator(&self, k: i32) -> Matrix3<f64> {
        let g = self.generators[(k.unsigned_abs() - 1) as usize];
        if k > 0 {
            g
        } else {
            inverse(&g)
        }
    }

    /// Largest entry of the relator product minus the identity.
    pub fn relation_residual(&self) -> f64 {
        let m = self.relation.iter().fold(Matrix3::identity(), |m, &k| m * self.generator(k));
        (m - Matrix3::identity()).abs().max()
    }

    /// Area of the fundamental polygon from its angles.
    pub fn domain_area(&self) -> f64 {
        let n = self.domain.len();
        let angles: f64 = (0..n)
            .map(|k| {
                let p = self.domain[k];
                let t = |q: &Vector3<f64>| q + p * mink(&p, q);
                let (u, v) = (t(&self.domain[(k + 1) % n]), t(&self.domain[(k + n - 1) % n]));
                (mink(&u, &v) / (mink(&u, &u) * mink(&v, &v)).sqrt()).clamp(-1.0, 1.0).acos()
            })
            .sum();
        (n as f64 - 2.0) * PI - angles
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::Hyperbolic {
            genus: self.genus,
            generators: self.generators.iter().map(to_rows).collect(),
        }
    }

    /// Group elements reachable by words of length ≤ `depth` that move
    /// (0,0,1) by at most `radius`, identity first, without repeats.
    pub fn elements(&self, depth: usize, radius: f64) -> Vec<Matrix3<f64>> {
        self.elements_around(depth, &Vector3::new(0.0, 0.0, 1.0), radius)
    }

    /// Same as `elements` with displacement measured at `center`.
    pub fn elements_around(&self, depth: usize, center: &Vector3<f64>, radius: f64) -> Vec<Matrix3<f64>> {
        let o = *center;
        let mut seen: BTreeMap<[i64; 9], ()> = BTreeMap::new();
        let mut out = vec![Matrix3::identity()];
        seen.insert(key(&Matrix3::identity()), ());
        let mut queue = VecDeque::from([(Matrix3::identity(), 0usize)]);
        let letters: Vec<i32> = (1..=self.generators.len() as i32).flat_map(|k| [k, -k]).collect();
        while let Some((g, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            for &k in &letters {
                let h = g * self.generator(k);
                if h2_dist(&o, &(h * o)) > radius {
                    continue;
                }
                let kh = key(&h);
                if seen.insert(kh, ()).is_none() {
                    out.push(h);
                    queue.push_back((h, d + 1));
                }
            }
        }
        out
    }
}

/// Inverse of an element of SO(2,1): J gᵀ J.
pub fn inverse(g: &Matrix3<f64>) -> Matrix3<f64> {
    let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    j * g.transpose() * j
}

/// Rounded entries identifying a group element.
pub fn key(g: &Matrix3<f64>) -> [i64; 9] {
    let mut k = [0i64; 9];
    for (i, x) in g.iter().enumerate() {
        k[i] = (x * 1e6).round() as i64;
    }
    k
}

pub fn to_rows(g: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [[g[(0, 0)], g[(0, 1)], g[(0, 2)]], [g[(1, 0)], g[(1, 1)], g[(1, 2)]], [g[(2, 0)], g[(2, 1)], g[(2, 2)]]]
}

pub fn from_rows(r: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::new(r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2])
}
