//! Convex polyhedra of the open hemisphere S³₊, built and checked in the
//! projective chart y = (x2, x3, x4)/x1.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::forms::{det4, sphere_inv, sphere_mul, QuadricPoint, Vec4, EPS_HEMI};
use crate::space::{euclid_angle, Space, SPHERE_ORIENT};
use crate::util::convex_hull_2d;

pub const EPS_PLANE: f64 = 1e-9;
pub const EPS_POLE_MERGE: f64 = 1e-8;
pub const EPS_AREA: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyEdge {
    pub v: [usize; 2],
    /// faces[0] runs v0 → v1, faces[1] runs v1 → v0.
    pub faces: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct ConvexPolyhedron {
    pub vertices: Vec<Vec4>,
    pub faces: Vec<Vec<usize>>,
    /// Inward unit poles: ⟨pole, x⟩ ≥ 0 on the polyhedron.
    pub poles: Vec<Vec4>,
    pub edges: Vec<PolyEdge>,
}

fn chart(v: &Vec4) -> Vector3<f64> {
    Vector3::new(v[1] / v[0], v[2] / v[0], v[3] / v[0])
}

fn plane_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.x.abs() < 0.6 { Vector3::x() } else { Vector3::y() };
    let u = n.cross(&helper).normalize();
    let w = n.cross(&u);
    (u, w)
}

pub fn hull(points: &[QuadricPoint]) -> Result<ConvexPolyhedron> {
    let v: Vec<Vec4> = points.iter().map(|p| p.v()).collect();
    hull_of(&v)
}

/// Convex hull of points of S³₊.
pub fn hull_of(points: &[Vec4]) -> Result<ConvexPolyhedron> {
    if points.len() < 4 {
        return Err(Error::Degenerate(format!("{} points, need at least 4", points.len())));
    }
    let pts: Vec<Vec4> = points
        .iter()
        .map(|p| QuadricPoint::hemisphere(*p).map(|q| q.v()))
        .collect::<Result<_>>()?;
    let ys: Vec<Vector3<f64>> = pts.iter().map(chart).collect();
    let n_pts = ys.len();
    let mut planes: Vec<(Vector3<f64>, f64, Vec4)> = Vec::new();
    for i in 0..n_pts {
        for j in i + 1..n_pts {
            for k in j + 1..n_pts {
                let n = (ys[j] - ys[i]).cross(&(ys[k] - ys[i]));
                let nn = n.norm();
                if nn < 1e-12 {
                    continue;
                }
                let n = n / nn;
                let d = n.dot(&ys[i]);
                let mut hi = f64::NEG_INFINITY;
                let mut lo = f64::INFINITY;
                for y in &ys {
                    let s = n.dot(y) - d;
                    hi = hi.max(s);
                    lo = lo.min(s);
                }
                let (n, d) = if hi <= EPS_PLANE && lo >= -EPS_PLANE {
                    return Err(Error::Degenerate("all points are coplanar".into()));
                } else if hi <= EPS_PLANE {
                    (n, d)
                } else if lo >= -EPS_PLANE {
                    (-n, -d)
                } else {
                    continue;
                };
                let pole = Vec4::new(d, -n.x, -n.y, -n.z) / (1.0 + d * d).sqrt();
                if planes.iter().any(|(_, _, q)| (q - pole).norm() < EPS_POLE_MERGE) {
                    continue;
                }
                planes.push((n, d, pole));
            }
        }
    }
    if planes.len() < 4 {
        return Err(Error::Degenerate("hull has fewer than 4 faces".into()));
    }
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for (n, d, _) in &planes {
        let members: Vec<usize> = (0..n_pts).filter(|&m| (n.dot(&ys[m]) - d).abs() <= EPS_PLANE).collect();
        let (u, w) = plane_basis(n);
        let flat: Vec<[f64; 2]> = members.iter().map(|&m| [u.dot(&ys[m]), w.dot(&ys[m])]).collect();
        let h = convex_hull_2d(&flat, 1e-10);
        if h.len() < 3 {
            return Err(Error::Degenerate("face with fewer than 3 vertices".into()));
        }
        cycles.push(h.into_iter().map(|i| members[i]).collect());
    }
    let mut used: Vec<usize> = cycles.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vec4> = used.iter().map(|&i| pts[i]).collect();
    let faces: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|i| remap[i]).collect()).collect();
    ConvexPolyhedron::from_faces(vertices, faces)
}

/// Rotate a cycle so that it starts at its least entry.
pub fn rotate_to_min(c: &mut [usize]) {
    if let Some(pos) = c.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i) {
        c.rotate_left(pos);
    }
}

impl ConvexPolyhedron {
    /// Build from vertices and face cycles; poles and orientation are
    /// recomputed and every invariant is checked.
    pub fn from_faces(vertices: Vec<Vec4>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut faces = faces;
        let mut poles = Vec::with_capacity(faces.len());
        let centroid: Vec4 = vertices.iter().sum();
        for f in faces.iter_mut() {
            if f.len() < 3 || f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::Geometry("invalid face cycle".into()));
            }
            let (a, b, c) = best_triple(&vertices, f);
            let mut n = crate::forms::cross4(&vertices[a], &vertices[b], &vertices[c]);
            let nn = n.norm();
            if nn < 1e-14 {
                return Err(Error::Degenerate("face vertices are collinear".into()));
            }
            n /= nn;
            if n.dot(&centroid) < 0.0 {
                n = -n;
            }
            let o = det4(&n, &vertices[f[0]], &vertices[f[1]], &vertices[f[2]]) * SPHERE_ORIENT;
            if o < 0.0 {
                f.reverse();
            }
            rotate_to_min(f);
            poles.push(n);
        }
        let mut order: Vec<usize> = (0..faces.len()).collect();
        order.sort_by_key(|&i| faces[i].clone());
        let faces: Vec<Vec<usize>> = order.iter().map(|&i| faces[i].clone()).collect();
        let poles: Vec<Vec4> = order.iter().map(|&i| poles[i]).collect();
        let edges = build_edges(&faces)?;
        let p = ConvexPolyhedron { vertices, faces, poles, edges };
        p.validate()?;
        Ok(p)
    }

    /// Build with given poles (trusted orientation); used by reconstruction.
    pub fn from_parts(vertices: Vec<Vec4>, faces: Vec<Vec<usize>>, poles: Vec<Vec4>) -> Result<Self> {
        let edges = build_edges(&faces)?;
        let p = ConvexPolyhedron { vertices, faces, poles, edges };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for v in &self.vertices {
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Geometry("vertex off the unit sphere".into()));
            }
            if v[0] < EPS_HEMI {
                return Err(Error::Geometry("vertex outside the open hemisphere".into()));
            }
        }
        for (f, a) in self.faces.iter().zip(&self.poles) {
            for &i in f {
                if a.dot(&self.vertices[i]).abs() > EPS_PLANE * 10.0 {
                    return Err(Error::Geometry("face is not planar".into()));
                }
            }
            for v in &self.vertices {
                if a.dot(v) < -EPS_PLANE * 10.0 {
                    return Err(Error::Geometry("polyhedron is not convex".into()));
                }
            }
            let m = f.len();
            for k in 0..m {
                let o = det4(a, &self.vertices[f[k]], &self.vertices[f[(k + 1) % m]], &self.vertices[f[(k + 2) % m]]);
                if o * SPHERE_ORIENT <= 0.0 {
                    return Err(Error::Geometry("face polygon is not convex".into()));
                }
            }
        }
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        if v - e + f != 2 {
            return Err(Error::Geometry(format!("Euler characteristic {} != 2", v - e + f)));
        }
        Ok(())
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().position(|e| e.v == key)
    }

    /// Faces around vertex v in cyclic order.
    pub fn vertex_star(&self, v: usize) -> Vec<usize> {
        faces_around(&self.faces, v)
    }

    /// Interior angle of face f at its k-th corner.
    pub fn face_angle(&self, f: usize, k: usize) -> f64 {
        let c = &self.faces[f];
        let m = c.len();
        let x = self.vertices[c[k]];
        let prev = self.vertices[c[(k + m - 1) % m]];
        let next = self.vertices[c[(k + 1) % m]];
        let t1 = next - x * x.dot(&next);
        let t2 = prev - x * x.dot(&prev);
        euclid_angle(&t1, &t2)
    }

    pub fn cone_angle(&self, v: usize) -> f64 {
        self.vertex_star(v)
            .iter()
            .map(|&f| {
                let k = self.faces[f].iter().position(|&i| i == v).unwrap();
                self.face_angle(f, k)
            })
            .sum()
    }

    /// Face f as a polygon on S² = e*, moved by the left multiplication by its pole's inverse.
    pub fn face_polygon(&self, f: usize) -> Result<SphericalPolygon> {
        let ai = sphere_inv(&self.poles[f]);
        let vs = self.faces[f]
            .iter()
            .map(|&i| Space::Sphere.to3(&sphere_mul(&ai, &self.vertices[i])))
            .collect();
        SphericalPolygon::from_vertices(vs)
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let m = self.faces[f].len();
        let s: f64 = (0..m).map(|k| self.face_angle(f, k)).sum();
        s - (m as f64 - 2.0) * PI
    }

    /// Image under the isometry x ↦ g x.
    pub fn left_mul(&self, g: &Vec4) -> ConvexPolyhedron {
        ConvexPolyhedron {
            vertices: self.vertices.iter().map(|v| sphere_mul(g, v)).collect(),
            faces: self.faces.clone(),
            poles: self.poles.iter().map(|a| sphere_mul(g, a)).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Normalized vertex centroid, an interior point.
    pub fn centroid(&self) -> Vec4 {
        let c: Vec4 = self.vertices.iter().sum();
        c / c.norm()
    }

    /// Isometric copy with the vertex centroid moved to e, and the centroid.
    pub fn centered(&self) -> (ConvexPolyhedron, Vec4) {
        let c = self.centroid();
        (self.left_mul(&sphere_inv(&c)), c)
    }
}

fn best_triple(vs: &[Vec4], f: &[usize]) -> (usize, usize, usize) {
    let m = f.len();
    let mut best = (f[0], f[1], f[2]);
    let mut val = -1.0;
    let step = (m / 3).max(1);
    for s in 0..m {
        let (a, b, c) = (f[s], f[(s + step) % m], f[(s + 2 * step) % m]);
        if a == b || b == c || a == c {
            continue;
        }
        let n = crate::forms::cross4(&vs[a], &vs[b], &vs[c]).norm();
        if n > val {
            val = n;
            best = (a, b, c);
        }
    }
    best
}

/// Edges of a closed oriented surface given by face cycles, sorted by vertex pair.
pub fn build_edges(faces: &[Vec<usize>]) -> Result<Vec<PolyEdge>> {
    let mut dir: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let m = f.len();
        for k in 0..m {
            let key = (f[k], f[(k + 1) % m]);
            if dir.insert(key, fi).is_some() {
                return Err(Error::Geometry(format!("directed edge {key:?} appears twice")));
            }
        }
    }
    let mut edges = Vec::new();
    for (&(a, b), &f0) in &dir {
        if a < b {
            let f1 = *dir
                .get(&(b, a))
                .ok_or_else(|| Error::Geometry(format!("edge ({a},{b}) borders one face")))?;
            edges.push(PolyEdge { v: [a, b], faces: [f0, f1] });
        } else if !dir.contains_key(&(b, a)) {
            return Err(Error::Geometry(format!("edge ({b},{a}) borders one face")));
        }
    }
    Ok(edges)
}

/// Faces containing v, in cyclic order: after face F comes the face across
/// the edge from v to its successor in F. Stops early at a boundary.
pub fn faces_around(faces: &[Vec<usize>], v: usize) -> Vec<usize> {
    let incident: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].contains(&v)).collect();
    if incident.is_empty() {
        return vec![];
    }
    let next_of = |f: usize| -> Option<usize> {
        let c = &faces[f];
        let k = c.iter().position(|&i| i == v)?;
        let w = c[(k + 1) % c.len()];
        incident.iter().copied().find(|&g| {
            let d = &faces[g];
            let j = d.iter().position(|&i| i == v).unwrap();
            g != f && d[(j + d.len() - 1) % d.len()] == w
        })
    };
    let prev_of = |f: usize| -> Option<usize> { incident.iter().copied().find(|&g| next_of(g) == Some(f)) };
    // Walk back to a boundary face if there is one.
    let mut start = incident[0];
    let mut guard = 0;
    while let Some(p) = prev_of(start) {
        if p == incident[0] || guard > incident.len() {
            start = incident[0];
            break;
        }
        start = p;
        guard += 1;
    }
    let mut out = vec![start];
    let mut cur = start;
    while let Some(n) = next_of(cur) {
        if n == start || out.len() > incident.len() {
            break;
        }
        out.push(n);
        cur = n;
    }
    out
}

/// Convex polygon on S² (unit 3-vectors), counter-clockwise.
#[derive(Clone, Debug)]
pub struct SphericalPolygon {
    pub vertices: Vec<Vector3<f64>>,
    /// Unit tangent at vertex i along side i.
    pub dirs: Vec<Vector3<f64>>,
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub digon: bool,
}

fn v4(v: &Vector3<f64>) -> Vec4 {
    Space::Sphere.from3(v)
}

impl SphericalPolygon {
    /// Polygon through the given vertices along minor arcs; reversed if clockwise.
    pub fn from_vertices(vertices: Vec<Vector3<f64>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Degenerate("polygon needs 3 vertices; use digon()".into()));
        }
        let mut vs: Vec<Vector3<f64>> = vertices.iter().map(|v| v.normalize()).collect();
        let s = Space::Sphere;
        let turn: f64 = (0..n)
            .map(|k| s.orient(&v4(&vs[k]), &v4(&vs[(k + 1) % n]), &v4(&vs[(k + 2) % n])))
            .sum();
        if turn < 0.0 {
            vs.reverse();
        }
        let mut dirs = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for k in 0..n {
            let p = v4(&vs[k]);
            let q = v4(&vs[(k + 1) % n]);
            let d = s.tangent_toward(&p, &q)?;
            dirs.push(s.to3(&d));
            lengths.push(s.dist(&p, &q));
        }
        // A convex polygon lies in an open hemisphere iff its perimeter is below 2π.
        if lengths.iter().sum::<f64>() >= 2.0 * PI - 1e-9 {
            return Err(Error::Geometry("polygon not in an open hemisphere".into()));
        }
        Self::finish(vs, dirs, lengths, false)
    }

    /// Digon with corners v and −v, first side leaving v along `d0`, interior angle `angle`.
    pub fn digon(v: Vector3<f64>, d0: Vector3<f64>, angle: f64) -> Result<Self> {
        if !(angle > 0.0 && angle < PI) {
            return Err(Error::Degenerate(format!("digon angle {angle} outside (0, π)")));
        }
        let v = v.normalize();
        let d0 = (d0 - v * v.dot(&d0)).normalize();
        let mut w = v.cross(&d0) * SPHERE_ORIENT;
        // w is d0 turned left by π/2 about v.
        if Space::Sphere.orient(&v4(&v), &v4(&d0), &v4(&w)) < 0.0 {
            w = -w;
        }
        let back = d0 * angle.cos() + w * angle.sin();
        let vs = vec![v, -v];
        let dirs = vec![d0, back];
        Self::finish(vs, dirs, vec![PI, PI], true)
    }

    fn finish(vs: Vec<Vector3<f64>>, dirs: Vec<Vector3<f64>>, lengths: Vec<f64>, digon: bool) -> Result<Self> {
        let s = Space::Sphere;
        let n = vs.len();
        let mut angles = Vec::with_capacity(n);
        for k in 0..n {
            let j = (k + n - 1) % n;
            let p = v4(&vs[k]);
            let out = v4(&dirs[k]);
            let back = -s.geodesic_tangent(&v4(&vs[j]), &v4(&dirs[j]), lengths[j]);
            if s.orient(&p, &out, &back) <= 0.0 {
                return Err(Error::Geometry("polygon is not convex".into()));
            }
            angles.push(s.angle_between(&p, &out, &back));
        }
        Ok(SphericalPolygon { vertices: vs, dirs, lengths, angles, digon })
    }

    pub fn area(&self) -> f64 {
        polygon_area(self)
    }

    /// Cyclic (length, angle) spectrum starting at each vertex.
    pub fn spectrum(&self) -> Vec<Vec<f64>> {
        (0..self.vertices.len()).map(|k| vec![self.lengths[k], self.angles[k]]).collect()
    }
}

pub fn polygon_area(poly: &SphericalPolygon) -> f64 {
    if poly.digon {
        return 2.0 * poly.angles[0];
    }
    Space::Sphere.polygon_area(&poly.angles)
}

#[derive(Clone, Debug)]
pub struct PolarLink {
    pub vertex: usize,
    /// Faces of P around the vertex, matching the polygon's corners.
    pub faces: Vec<usize>,
    pub polygon: SphericalPolygon,
}

/// Link of vertex v, drawn on S² = e* by the left multiplication by v⁻¹.
pub fn polar_link(p: &ConvexPolyhedron, v: usize) -> Result<PolarLink> {
    let x = p.vertices[v];
    let xi = sphere_inv(&x);
    let mut faces = p.vertex_star(v);
    let pts: Vec<Vector3<f64>> = faces.iter().map(|&f| Space::Sphere.to3(&sphere_mul(&xi, &(-p.poles[f])))).collect();
    let poly = SphericalPolygon::from_vertices(pts.clone())?;
    if poly.vertices[0] != pts[0].normalize() || (pts.len() > 1 && poly.vertices[1] != pts[1].normalize()) {
        faces.reverse();
    }
    Ok(PolarLink { vertex: v, faces, polygon: poly })
}

pub fn exterior_dihedral(p: &ConvexPolyhedron, edge: usize) -> f64 {
    let e = &p.edges[edge];
    euclid_angle(&p.poles[e.faces[0]], &p.poles[e.faces[1]])
}

/// Polar dual; vertex i of the dual is the pole of face i and face j of
/// the dual is dual to vertex j. Requires e in the interior of P.
pub fn polar_dual(p: &ConvexPolyhedron) -> Result<ConvexPolyhedron> {
    if let Some(a) = p.poles.iter().find(|a| a[0] < EPS_HEMI) {
        return Err(Error::Geometry(format!(
            "e is not interior (pole with x1 = {:e}); use centered()",
            a[0]
        )));
    }
    let faces: Vec<Vec<usize>> = (0..p.vertices.len()).map(|v| p.vertex_star(v)).collect();
    let d = ConvexPolyhedron::from_faces(p.poles.clone(), faces)?;
    // from_faces sorts faces; restore the vertex correspondence.
    let mut faces = vec![Vec::new(); p.vertices.len()];
    let mut poles = vec![Vec4::zeros(); p.vertices.len()];
    for (f, a) in d.faces.iter().zip(&d.poles) {
        let mut v = f.clone();
        v.sort_unstable();
        let target = (0..p.vertices.len())
            .find(|&x| {
                let mut s = p.vertex_star(x);
                s.sort_unstable();
                s == v
            })
            .ok_or_else(|| Error::Geometry("dual face without a matching vertex".into()))?;
        faces[target] = f.clone();
        poles[target] = *a;
    }
    ConvexPolyhedron::from_parts(d.vertices, faces, poles)
}
