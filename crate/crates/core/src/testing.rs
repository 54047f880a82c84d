//! Seeded random instances shared by the test suites and the CLI checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::forms::Vec4;
use crate::polyhedra::{hull_of, ConvexPolyhedron};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform unit vector of R³.
pub fn unit3<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// cos(r) e + sin(r) u with u uniform in e*.
pub fn point_at<R: Rng>(rng: &mut R, r: f64) -> Vec4 {
    let u = unit3(rng);
    Vec4::new(r.cos(), r.sin() * u[0], r.sin() * u[1], r.sin() * u[2])
}

/// Random convex polyhedron of S³₊ with e in its interior and between
/// 4 and `n` vertices (usually close to `n`).
pub fn random_polyhedron<R: Rng>(rng: &mut R, n: usize) -> ConvexPolyhedron {
    loop {
        let pts: Vec<Vec4> = (0..n).map(|_| {
            let r = rng.gen_range(0.55..1.15);
            point_at(rng, r)
        }).collect();
        if let Ok(p) = hull_of(&pts) {
            let ok = p.poles.iter().all(|a| a[0] > 0.05)
                && p.vertices.len() + 2 >= n.min(8)
                && (0..p.edges.len()).all(|e| crate::polyhedra::exterior_dihedral(&p, e) > 0.02)
                && p.edges.iter().all(|e| (p.vertices[e.v[0]] - p.vertices[e.v[1]]).norm() > 0.02);
            if ok {
                return p;
            }
        }
    }
}
