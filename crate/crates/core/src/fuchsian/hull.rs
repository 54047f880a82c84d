use std::cmp::Ordering;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{ads_form, Vec4};
use crate::space::Space;
use crate::util::convex_hull_2d;

use super::group::{h2_dist, h2_normalize, key, mink, FuchsianGroup};

/// Every orbit is complete within this distance of every base point.
pub const ORBIT_RADIUS: f64 = 7.5;
/// Star neighbors must stay this far inside the orbit radius.
pub const ORBIT_MARGIN: f64 = 2.0;
pub const START_WORD_LEN: usize = 4;
pub const MAX_WORD_LEN: usize = 10;
/// Unit direction triples with |det| below this are coplanar.
pub const EPS_COPLANAR: f64 = 1e-9;

/// Point g·vⱼ of the orbit of the j-th vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrbitPoint {
    pub orbit: usize,
    /// Index into `FuchsianSurface::elements`; 0 is the identity.
    pub element: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Neighbor {
    pub point: OrbitPoint,
    /// False for the diagonals added to triangulate faces.
    pub true_edge: bool,
}

/// Faces around the fundamental vertex on ray x, counter-clockwise, and
/// the triangulated link.
#[derive(Clone, Debug, Serialize)]
pub struct Star {
    /// Each face starts at the vertex itself and runs counter-clockwise.
    pub faces: Vec<Vec<OrbitPoint>>,
    /// Neighbors in the triangulation, counter-clockwise; triangle j is
    /// (x, neighbors[j], neighbors[j+1]).
    pub neighbors: Vec<Neighbor>,
}

#[derive(Clone, Debug)]
pub struct FuchsianConfig {
    pub group: FuchsianGroup,
    /// Base points on H (hyperboloid x3 > 0), one per ray.
    pub rays: Vec<Vector3<f64>>,
    pub heights: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct FuchsianSurface {
    pub group: FuchsianGroup,
    pub rays: Vec<Vector3<f64>>,
    pub heights: Vec<f64>,
    pub elements: Vec<Matrix3<f64>>,
    pub stars: Vec<Star>,
    /// Word length at which the combinatorics settled.
    pub word_len: usize,
}

/// Vertex cos(h)p + sin(h)N on the ray through p, N = (0,0,0,1).
pub fn ray_point(p: &Vector3<f64>, h: f64) -> Vec4 {
    let (s, c) = h.sin_cos();
    Vec4::new(c * p[0], c * p[1], c * p[2], s)
}

impl FuchsianSurface {
    pub fn n(&self) -> usize {
        self.rays.len()
    }

    /// Base point of an orbit point on H.
    pub fn base(&self, q: OrbitPoint) -> Vector3<f64> {
        self.elements[q.element] * self.rays[q.orbit]
    }

    pub fn point(&self, q: OrbitPoint) -> Vec4 {
        self.point_at(q, &self.heights)
    }

    pub fn point_at(&self, q: OrbitPoint, heights: &[f64]) -> Vec4 {
        ray_point(&self.base(q), heights[q.orbit])
    }

    pub fn rep(&self, i: usize) -> OrbitPoint {
        OrbitPoint { orbit: i, element: 0 }
    }

    /// Same surface combinatorics with other heights.
    pub fn with_heights(&self, heights: &[f64]) -> FuchsianSurface {
        FuchsianSurface { heights: heights.to_vec(), ..self.clone() }
    }
}

fn check_config(cfg: &FuchsianConfig) -> Result<()> {
    if cfg.rays.is_empty() || cfg.rays.len() != cfg.heights.len() {
        return Err(Error::Geometry("need one height per ray".into()));
    }
    for (i, p) in cfg.rays.iter().enumerate() {
        if (mink(p, p) + 1.0).abs() > 1e-9 || p[2] <= 0.0 {
            return Err(Error::Geometry(format!("ray {i} base point is not on H")));
        }
    }
    for (i, &h) in cfg.heights.iter().enumerate() {
        if !(h > 0.0 && h < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Geometry(format!("height {i} = {h} outside (0, π/2)")));
        }
    }
    Ok(())
}

type Signature = Vec<Vec<Vec<(usize, [i64; 9])>>>;

fn signature(elements: &[Matrix3<f64>], stars: &[Star]) -> Signature {
    stars
        .iter()
        .map(|s| s.faces.iter().map(|f| f.iter().map(|q| (q.orbit, key(&elements[q.element]))).collect()).collect())
        .collect()
}

/// Boundary of the convex hull of the orbits other than H, restricted to
/// the stars of the fundamental vertices. The orbit is truncated to words
/// of growing length until the stars agree for three consecutive lengths.
pub fn orbit_hull(cfg: &FuchsianConfig, max_word_len: usize) -> Result<FuchsianSurface> {
    check_config(cfg)?;
    let cap = max_word_len.min(MAX_WORD_LEN);
    let mut history: Vec<Signature> = Vec::new();
    for len in START_WORD_LEN..=cap {
        let elements = cfg.group.elements_around(len, &center(cfg), element_radius(cfg));
        let stars = (0..cfg.rays.len())
            .map(|i| star(cfg, &elements, i))
            .collect::<Result<Vec<_>>>()?;
        history.push(signature(&elements, &stars));
        let k = history.len();
        if k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3] {
            let s = FuchsianSurface {
                group: cfg.group.clone(),
                rays: cfg.rays.clone(),
                heights: cfg.heights.clone(),
                elements,
                stars,
                word_len: len,
            };
            check_margin(&s)?;
            return Ok(s);
        }
    }
    Err(Error::Geometry(format!("hull combinatorics not stable up to word length {cap}")))
}

/// Stars with the orbit truncated at a fixed word length (no stability loop).
pub fn orbit_hull_at(cfg: &FuchsianConfig, word_len: usize) -> Result<FuchsianSurface> {
    check_config(cfg)?;
    let elements = cfg.group.elements_around(word_len, &center(cfg), element_radius(cfg));
    let stars = (0..cfg.rays.len()).map(|i| star(cfg, &elements, i)).collect::<Result<Vec<_>>>()?;
    let s = FuchsianSurface {
        group: cfg.group.clone(),
        rays: cfg.rays.clone(),
        heights: cfg.heights.clone(),
        elements,
        stars,
        word_len,
    };
    check_margin(&s)?;
    Ok(s)
}

fn center(cfg: &FuchsianConfig) -> Vector3<f64> {
    h2_normalize(&cfg.rays.iter().sum())
}

/// With c the center and p, q base points, d(c, g c) ≤ d(p, g q) + 2 max d(c, ·).
fn element_radius(cfg: &FuchsianConfig) -> f64 {
    let c = center(cfg);
    ORBIT_RADIUS + 2.0 * cfg.rays.iter().map(|p| h2_dist(&c, p)).fold(0.0, f64::max)
}

fn check_margin(s: &FuchsianSurface) -> Result<()> {
    for (i, st) in s.stars.iter().enumerate() {
        for f in &st.faces {
            for &q in f {
                if h2_dist(&s.rays[i], &s.base(q)) > ORBIT_RADIUS - ORBIT_MARGIN {
                    return Err(Error::Geometry(format!("star of vertex {i} reaches the orbit truncation")));
                }
            }
        }
    }
    Ok(())
}

/// Orientation of three points of H, positive when counter-clockwise.
pub fn h2_orient(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let s = Space::Hyperbolic;
    s.orient(&s.from3(a), &s.from3(b), &s.from3(c))
}

fn det3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}

/// Euclidean vector m with m·u > 0 for every u, by the perceptron rule.
fn separating(dirs: &[Vector3<f64>], start: Vector3<f64>) -> Option<Vector3<f64>> {
    let mut m = start.normalize();
    for _ in 0..20000 {
        let worst = dirs
            .iter()
            .map(|u| (m.dot(u), u))
            .min_by(|a, b| a.0.total_cmp(&b.0))?;
        if worst.0 > 1e-12 {
            return Some(m);
        }
        m = (m + worst.1 * (1e-3 - worst.0).max(1e-3)).normalize();
    }
    None
}

/// Star of the fundamental vertex on ray i, in the affine chart
/// y ↦ (y1, y2, y3)/y4 where the vertex is cot(h)·p.
fn star(cfg: &FuchsianConfig, elements: &[Matrix3<f64>], i: usize) -> Result<Star> {
    let n = cfg.rays.len();
    let chart = |q: OrbitPoint| elements[q.element] * cfg.rays[q.orbit] / cfg.heights[q.orbit].tan();
    let me = OrbitPoint { orbit: i, element: 0 };
    let x = chart(me);
    let mut pts: Vec<OrbitPoint> = Vec::new();
    let mut dirs: Vec<Vector3<f64>> = Vec::new();
    for e in 0..elements.len() {
        for j in 0..n {
            let q = OrbitPoint { orbit: j, element: e };
            if q == me {
                continue;
            }
            let u = chart(q) - x;
            if u.norm() < 1e-12 {
                return Err(Error::Geometry(format!("orbit point coincides with vertex {i}")));
            }
            pts.push(q);
            dirs.push(u.normalize());
        }
    }
    let p = cfg.rays[i];
    let m = separating(&dirs, Vector3::new(-p[0], -p[1], p[2]))
        .ok_or_else(|| Error::Geometry(format!("vertex {i} is not in convex position")))?;
    // Planar picture of the tangent cone on the plane m·u = 1.
    let e1 = m.cross(&Vector3::new(0.3, -0.7, 0.5)).normalize();
    let e2 = m.cross(&e1);
    let flat: Vec<[f64; 2]> = dirs
        .iter()
        .map(|u| {
            let w = u / m.dot(u);
            [w.dot(&e1), w.dot(&e2)]
        })
        .collect();
    let mut hull = convex_hull_2d(&flat, 0.0);
    if hull.len() < 3 {
        return Err(Error::Geometry(format!("vertex {i} has a degenerate star")));
    }
    // Counter-clockwise as seen on H.
    let pa = h2_normalize(&chart(pts[hull[0]]));
    let pb = h2_normalize(&chart(pts[hull[1]]));
    if h2_orient(&p, &pa, &pb) < 0.0 {
        hull.reverse();
    }
    // Drop hull vertices coplanar with their neighbors (flat vertex ⇒ not a true edge).
    loop {
        let k = hull.len();
        let flat_at = (0..k).find(|&j| {
            let (a, b, c) = (hull[(j + k - 1) % k], hull[j], hull[(j + 1) % k]);
            det3(&dirs[a], &dirs[b], &dirs[c]).abs() < EPS_COPLANAR
        });
        match flat_at {
            Some(j) if k > 3 => {
                hull.remove(j);
            }
            Some(_) => return Err(Error::Geometry(format!("vertex {i} lies inside a face"))),
            None => break,
        }
    }
    let k = hull.len();
    let mut faces = Vec::with_capacity(k);
    for j in 0..k {
        let (a, b) = (hull[j], hull[(j + 1) % k]);
        // Points in the face plane, strictly between a and b as seen from x.
        let mut mid: Vec<(f64, usize)> = (0..pts.len())
            .filter(|&c| c != a && c != b)
            .filter(|&c| det3(&dirs[a], &dirs[b], &dirs[c]).abs() < EPS_COPLANAR)
            .filter_map(|c| {
                let (fa, fb, fc) = (flat[a], flat[b], flat[c]);
                let d = [fb[0] - fa[0], fb[1] - fa[1]];
                let t = ((fc[0] - fa[0]) * d[0] + (fc[1] - fa[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
                (t > 0.0 && t < 1.0).then_some((t, c))
            })
            .collect();
        mid.sort_by(|u, v| u.0.total_cmp(&v.0));
        let mut face = vec![me, pts[a]];
        face.extend(mid.iter().map(|&(_, c)| pts[c]));
        face.push(pts[b]);
        faces.push(face);
    }
    let neighbors = triangulate(cfg, elements, &faces);
    Ok(Star { faces, neighbors })
}

fn ads_len(a: &Vec4, b: &Vec4) -> f64 {
    (-ads_form(a, b)).max(1.0).acosh()
}

/// Fan apex of a face: least orbit index, ties broken by the cyclic
/// sequence of orbit indices and side lengths, so the choice commutes
/// with the group action.
fn fan_apex(pos: &[Vec4], orbit: &[usize]) -> usize {
    let m = pos.len();
    let keys: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let mut v: Vec<f64> = (0..m).map(|j| orbit[(k + j) % m] as f64).collect();
            v.extend((0..m).map(|j| (ads_len(&pos[(k + j) % m], &pos[(k + j + 1) % m]) * 1e9).round()));
            v
        })
        .collect();
    (0..m)
        .min_by(|&a, &b| {
            keys[a]
                .iter()
                .zip(&keys[b])
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
        .unwrap()
}

fn triangulate(cfg: &FuchsianConfig, elements: &[Matrix3<f64>], faces: &[Vec<OrbitPoint>]) -> Vec<Neighbor> {
    let mut out = Vec::new();
    for f in faces {
        let m = f.len();
        let pos: Vec<Vec4> =
            f.iter().map(|q| ray_point(&(elements[q.element] * cfg.rays[q.orbit]), cfg.heights[q.orbit])).collect();
        let orbit: Vec<usize> = f.iter().map(|q| q.orbit).collect();
        // Neighbors of f[0] inside this face, from f[1] to f[m−1], excluding the last.
        out.push(Neighbor { point: f[1], true_edge: true });
        if m > 3 {
            let apex = fan_apex(&pos, &orbit);
            if apex == 0 {
                out.extend((2..m - 1).map(|k| Neighbor { point: f[k], true_edge: false }));
            } else if apex != 1 && apex != m - 1 {
                out.push(Neighbor { point: f[apex], true_edge: false });
            }
        }
    }
    out
}

impl FuchsianSurface {
    /// Triangles (x, s, t) of the star of fundamental vertex i.
    pub fn triangles(&self, i: usize) -> Vec<[OrbitPoint; 3]> {
        let nb = &self.stars[i].neighbors;
        let k = nb.len();
        (0..k).map(|j| [self.rep(i), nb[j].point, nb[(j + 1) % k].point]).collect()
    }

    /// Every triangle of star i is counter-clockwise on H.
    pub fn star_is_counter_clockwise(&self, i: usize) -> bool {
        let p = self.rays[i];
        self.triangles(i).iter().all(|t| h2_orient(&p, &self.base(t[1]), &self.base(t[2])) > 0.0)
    }
}
