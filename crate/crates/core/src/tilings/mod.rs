//! Flippable tilings: projection of polyhedra, development back to the
//! white polyhedron, flip, recoloring, cone metrics and validation.
//!
//! Every tiling vertex is a corner of exactly one white and one black face.
//! Each edge carries a supporting geodesic `t ↦ geodesic(origin, dir, t)`,
//! `t ∈ [0, length]`, and the face segments lying along it.

mod antipodal;
mod develop;
mod metric;
mod project;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};

use crate::forms::Vec4;
use crate::space::Space;

pub use antipodal::make_antipodal_tiling;
pub use develop::{develop, flip, white_polyhedron, Developed};
pub use metric::{black_metric, white_metric, ConeMetric, ConePoint};
pub use project::{angle_project, project, project_complex, AngleImage, FaceComplex, ProjectionMap};
pub use validate::{validate_tiling, validate_tiling_with, ValidationReport, Violation, ViolationKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn opposite(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

/// Side of a projection map: LEFT is x ↦ a⁻¹x, RIGHT is x ↦ xa⁻¹.
pub type ProjectionSide = Handedness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Forward,
    Backward,
}

/// Surface carrying the tiling. A hyperbolic tiling is a patch of the
/// universal cover; `generators` act on (x1, x2, x3) and fix x4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Ambient {
    Sphere,
    Hyperbolic { genus: usize, generators: Vec<[[f64; 3]; 3]> },
}

impl Ambient {
    pub fn space(&self) -> Space {
        match self {
            Ambient::Sphere => Space::Sphere,
            Ambient::Hyperbolic { .. } => Space::Hyperbolic,
        }
    }

    /// Area the weighted faces must add up to.
    pub fn area_budget(&self) -> f64 {
        match self {
            Ambient::Sphere => 4.0 * std::f64::consts::PI,
            Ambient::Hyperbolic { genus, .. } => 4.0 * std::f64::consts::PI * (*genus as f64 - 1.0),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(w: &f64) -> bool {
    *w == 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Face {
    pub color: Color,
    /// Counter-clockwise corner cycle.
    pub vertices: Vec<usize>,
    /// Share of the face counted in the area budget (patches of a quotient).
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub face: usize,
    pub side: Side,
    pub position: Position,
    pub t0: f64,
    pub t1: f64,
    /// Tiling vertices at t0 and t1.
    pub v: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingEdge {
    /// Vertices at t = 0 and t = length.
    pub ends: [usize; 2],
    pub origin: Vec4,
    pub dir: Vec4,
    pub length: f64,
    pub segments: Vec<Segment>,
}

impl TilingEdge {
    pub fn point(&self, space: Space, t: f64) -> Vec4 {
        space.geodesic(&self.origin, &self.dir, t)
    }

    pub fn tangent(&self, space: Space, t: f64) -> Vec4 {
        space.geodesic_tangent(&self.origin, &self.dir, t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlippableTiling {
    pub handedness: Handedness,
    pub ambient: Ambient,
    pub vertices: Vec<Vec4>,
    pub faces: Vec<Face>,
    pub edges: Vec<TilingEdge>,
    /// Two black or two white faces: a hosohedron or dihedron case.
    #[serde(default)]
    pub degenerate: bool,
}

impl FlippableTiling {
    pub fn space(&self) -> Space {
        self.ambient.space()
    }

    pub fn faces_of(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&f| self.faces[f].color == color)
    }

    pub fn count(&self, color: Color) -> usize {
        self.faces_of(color).count()
    }

    /// (edge, segment) for side k of face f, the side running from corner k to k+1.
    pub fn side_segment(&self, f: usize, k: usize) -> Option<(usize, usize)> {
        let c = &self.faces[f].vertices;
        let (a, b) = (c[k], c[(k + 1) % c.len()]);
        for (ei, e) in self.edges.iter().enumerate() {
            for (si, s) in e.segments.iter().enumerate() {
                if s.face == f && directed(s) == (a, b) {
                    return Some((ei, si));
                }
            }
        }
        None
    }

    /// Unit tangents at corner k of face f: (outgoing side, back along the
    /// incoming side). A side without a segment (patch boundary) is taken
    /// as the geodesic between its corners.
    pub fn corner_tangents(&self, f: usize, k: usize) -> Result<(Vec4, Vec4)> {
        let space = self.space();
        let c = &self.faces[f].vertices;
        let m = c.len();
        let p = self.vertices[c[k]];
        let out = match self.side_segment(f, k) {
            Some((e, s)) => {
                let seg = &self.edges[e].segments[s];
                match seg.side {
                    Side::Left => self.edges[e].tangent(space, seg.t0),
                    Side::Right => -self.edges[e].tangent(space, seg.t1),
                }
            }
            None if m > 2 => space.tangent_toward(&p, &self.vertices[c[(k + 1) % m]])?,
            None => return Err(Error::Geometry(format!("digon {f} has a side without a segment"))),
        };
        let back = match self.side_segment(f, (k + m - 1) % m) {
            Some((e, s)) => {
                let seg = &self.edges[e].segments[s];
                match seg.side {
                    Side::Left => -self.edges[e].tangent(space, seg.t1),
                    Side::Right => self.edges[e].tangent(space, seg.t0),
                }
            }
            None if m > 2 => space.tangent_toward(&p, &self.vertices[c[(k + m - 1) % m]])?,
            None => return Err(Error::Geometry(format!("digon {f} has a side without a segment"))),
        };
        Ok((out, back))
    }

    /// Interior angle of face f at corner k.
    pub fn corner_angle(&self, f: usize, k: usize) -> Result<f64> {
        let (out, back) = self.corner_tangents(f, k)?;
        let p = self.vertices[self.faces[f].vertices[k]];
        Ok(self.space().angle_between(&p, &out, &back))
    }

    pub fn face_area(&self, f: usize) -> Result<f64> {
        let m = self.faces[f].vertices.len();
        let angles = (0..m).map(|k| self.corner_angle(f, k)).collect::<Result<Vec<_>>>()?;
        Ok(self.space().polygon_area(&angles))
    }

    /// Lengths of the sides of face f, in cycle order.
    pub fn side_lengths(&self, f: usize) -> Result<Vec<f64>> {
        (0..self.faces[f].vertices.len())
            .map(|k| {
                let (e, s) = self
                    .side_segment(f, k)
                    .ok_or_else(|| Error::Geometry(format!("face {f} has a side without a segment")))?;
                let s = &self.edges[e].segments[s];
                Ok(s.t1 - s.t0)
            })
            .collect()
    }

    /// Cyclic (side length, corner angle) spectrum of face f.
    pub fn spectrum(&self, f: usize) -> Result<Vec<Vec<f64>>> {
        let lens = self.side_lengths(f)?;
        (0..lens.len()).map(|k| Ok(vec![lens[k], self.corner_angle(f, k)?])).collect()
    }

    /// Face containing vertex v as a corner with the given color, and the corner index.
    pub fn corner_of(&self, v: usize, color: Color) -> Option<(usize, usize)> {
        self.faces_of(color).find_map(|f| self.faces[f].vertices.iter().position(|&u| u == v).map(|k| (f, k)))
    }
}

/// Directed side (a, b) of the face a segment belongs to.
pub(crate) fn directed(s: &Segment) -> (usize, usize) {
    match s.side {
        Side::Left => (s.v[0], s.v[1]),
        Side::Right => (s.v[1], s.v[0]),
    }
}

/// Handedness implied by the labels of one edge, if its black segments agree.
pub fn edge_handedness(e: &TilingEdge, faces: &[Face]) -> Option<Handedness> {
    let mut out = None;
    for s in &e.segments {
        if faces.get(s.face)?.color != Color::Black {
            continue;
        }
        let h = match (s.position, s.side) {
            (Position::Forward, Side::Right) | (Position::Backward, Side::Left) => Handedness::Right,
            _ => Handedness::Left,
        };
        if out.is_some_and(|o| o != h) {
            return None;
        }
        out = Some(h);
    }
    out
}

/// Rebuild face cycles by chaining the directed sides given by the segments.
/// `start` picks the first corner of each face; None means its least vertex.
pub(crate) fn cycles_from_segments(
    n_faces: usize,
    edges: &[TilingEdge],
    start: &dyn Fn(usize) -> Option<usize>,
) -> Result<Vec<Vec<usize>>> {
    let next = next_maps(n_faces, edges)?;
    next.iter().enumerate().map(|(f, nx)| cycle_of(f, nx, start(f))).collect()
}

/// For each face, the successor of each vertex along its segments.
pub(crate) fn next_maps(n_faces: usize, edges: &[TilingEdge]) -> Result<Vec<BTreeMap<usize, usize>>> {
    let mut next: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n_faces];
    for e in edges {
        for s in &e.segments {
            let (a, b) = directed(s);
            if next[s.face].insert(a, b).is_some() {
                return Err(Error::Geometry(format!("face {} leaves vertex {a} twice", s.face)));
            }
        }
    }
    Ok(next)
}

pub(crate) fn cycle_of(f: usize, nx: &BTreeMap<usize, usize>, start: Option<usize>) -> Result<Vec<usize>> {
    let first = match start {
        Some(v) => v,
        None => *nx.keys().next().ok_or_else(|| Error::Geometry(format!("face {f} has no sides")))?,
    };
    let mut cyc = vec![first];
    let mut cur = first;
    loop {
        let n = *nx.get(&cur).ok_or_else(|| Error::Geometry(format!("face {f} is not a closed cycle")))?;
        if n == first {
            break;
        }
        if cyc.len() > nx.len() {
            return Err(Error::Geometry(format!("face {f} boundary is not a simple cycle")));
        }
        cyc.push(n);
        cur = n;
    }
    if cyc.len() != nx.len() {
        return Err(Error::Geometry(format!("face {f} boundary has several components")));
    }
    Ok(cyc)
}

/// Sort faces by color, then least vertex index; returns old → new indices.
pub(crate) fn sort_faces(faces: &mut Vec<Face>, edges: &mut [TilingEdge]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by_key(|&f| (faces[f].color, faces[f].vertices.iter().min().copied().unwrap_or(usize::MAX)));
    let mut new_of = vec![0; faces.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    *faces = order.iter().map(|&i| faces[i].clone()).collect();
    for e in edges.iter_mut() {
        for s in &mut e.segments {
            s.face = new_of[s.face];
        }
    }
    new_of
}

/// Sort edges by their end vertices.
pub(crate) fn sort_edges(edges: &mut [TilingEdge]) {
    edges.sort_by_key(|e| (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1])));
}

/// The tiling with colors exchanged; handedness flips and (T*)* = T.
pub fn recolor(t: &FlippableTiling) -> FlippableTiling {
    let mut out = t.clone();
    out.handedness = t.handedness.opposite();
    for f in &mut out.faces {
        f.color = f.color.other();
    }
    sort_faces(&mut out.faces, &mut out.edges);
    out
}

/// A hyperbolic tiling moved by the boost taking its vertex centroid to
/// (0, 0, 1); a spherical tiling is returned unchanged.
pub fn recentered(t: &FlippableTiling) -> FlippableTiling {
    let Ambient::Hyperbolic { genus, generators } = &t.ambient else { return t.clone() };
    let form = |u: &Vector3<f64>, v: &Vector3<f64>| u.x * v.x + u.y * v.y - u.z * v.z;
    let sum: Vector3<f64> = t.vertices.iter().map(|v| Vector3::new(v[0], v[1], v[2])).sum();
    let n2 = -form(&sum, &sum);
    if !(n2 > 0.0) || sum.z <= 0.0 {
        return t.clone();
    }
    let c = sum / n2.sqrt();
    let e = Vector3::z();
    // Reflection in e + c (c ↦ −e), then in e (−e ↦ e).
    let m = e + c;
    let reflect = |v: Vector3<f64>, n: &Vector3<f64>| v - n * (2.0 * form(&v, n) / form(n, n));
    let boost = |v: Vector3<f64>| reflect(reflect(v, &m), &e);
    let b = Matrix3::from_columns(&[boost(Vector3::x()), boost(Vector3::y()), boost(Vector3::z())]);
    let b_inv = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)) * b.transpose() * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    let apply = |v: &Vec4| {
        let w = b * Vector3::new(v[0], v[1], v[2]);
        Vec4::new(w.x, w.y, w.z, v[3])
    };
    let space = t.space();
    let mut out = t.clone();
    out.ambient = Ambient::Hyperbolic {
        genus: *genus,
        generators: generators
            .iter()
            .map(|g| {
                let g = b * Matrix3::from_fn(|i, j| g[i][j]) * b_inv;
                [[g[(0, 0)], g[(0, 1)], g[(0, 2)]], [g[(1, 0)], g[(1, 1)], g[(1, 2)]], [g[(2, 0)], g[(2, 1)], g[(2, 2)]]]
            })
            .collect(),
    };
    out.vertices = t.vertices.iter().map(|v| space.renormalize(apply(v))).collect();
    for e in &mut out.edges {
        e.origin = space.renormalize(apply(&e.origin));
        e.dir = apply(&e.dir);
    }
    out
}

/// Isometry check between two tilings with the same vertex indexing: a
/// linear isometry of the ambient form (orientation preserving) carrying
/// every vertex of `a` onto the same vertex of `b`. Returns the largest
/// intrinsic distance between matched vertices, or None when no frame can
/// be fitted.
pub fn congruence_error(a: &FlippableTiling, b: &FlippableTiling) -> Option<f64> {
    if a.vertices.len() != b.vertices.len() || a.space() != b.space() {
        return None;
    }
    let (coords, diag): (&[usize], &[f64]) = match a.space() {
        Space::Sphere => (&[1, 2, 3], &[1.0, 1.0, 1.0]),
        Space::Hyperbolic => (&[0, 1, 2], &[1.0, 1.0, -1.0]),
    };
    let src: Vec<_> = a.vertices.iter().map(|v| crate::util::to_dvec(v, coords)).collect();
    let dst: Vec<_> = b.vertices.iter().map(|v| crate::util::to_dvec(v, coords)).collect();
    let al = crate::util::align_frames(&src, &dst, diag)?;
    if al.det <= 0.0 || al.form_defect > 1e-6 {
        return None;
    }
    let form = |u: &nalgebra::DVector<f64>| u.iter().zip(diag).map(|(x, d)| d * x * x).sum::<f64>();
    let dist = |p: &nalgebra::DVector<f64>, q: &nalgebra::DVector<f64>| {
        let u = &al.matrix * p;
        let u = &u / form(&u).abs().sqrt();
        let chord = form(&(u - q)).max(0.0).sqrt();
        match a.space() {
            Space::Sphere => 2.0 * (chord / 2.0).min(1.0).asin(),
            Space::Hyperbolic => 2.0 * (chord / 2.0).asinh(),
        }
    };
    Some(src.iter().zip(&dst).map(|(p, q)| dist(p, q)).fold(0.0, f64::max))
}

/// Same faces (colors and cycles up to rotation) in both tilings.
pub fn same_combinatorics(a: &FlippableTiling, b: &FlippableTiling) -> bool {
    let norm = |f: &Face| {
        let mut c = f.vertices.clone();
        crate::polyhedra::rotate_to_min(&mut c);
        (f.color, c)
    };
    let mut fa: Vec<_> = a.faces.iter().map(norm).collect();
    let mut fb: Vec<_> = b.faces.iter().map(norm).collect();
    fa.sort();
    fb.sort();
    fa == fb
}
