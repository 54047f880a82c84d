use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::forms::{canonical_sign, sphere_inv, sphere_mul, Vec4, EPS_HEMI};
use crate::polyhedra::{rotate_to_min, ConvexPolyhedron};
use crate::space::Space;
use crate::tol::Tolerances;
use crate::util::UnionFind;

use super::{project_complex, recentered, Color, FaceComplex, FlippableTiling, Handedness, Side};

/// Polyhedral surface recovered from a tiling. Face i is white face
/// `white_faces[i]` of the tiling with the same corner order; vertex i for
/// i < number of black faces is the apex of the i-th black face.
#[derive(Clone, Debug)]
pub struct Developed {
    pub space: Space,
    pub handedness: Handedness,
    pub white_faces: Vec<usize>,
    pub poles: Vec<Vec4>,
    pub vertices: Vec<Vec4>,
    pub faces: Vec<Vec<usize>>,
    /// Tiling black face of each vertex, if any.
    pub black_faces: Vec<Option<usize>>,
}

fn unit(space: Space, a: Vec4) -> Vec4 {
    a / space.dot(&a, &a).abs().sqrt()
}

/// Distance |a⁻¹b − e| between group elements, up to sign on AdS₃. It is
/// invariant under left translation, so far points are not penalized for
/// their large coordinates.
fn gap(space: Space, a: &Vec4, b: &Vec4) -> f64 {
    match space {
        Space::Sphere => (a - b).norm(),
        Space::Hyperbolic => {
            let r = space.mul(&space.inv(a), b);
            let e = space.identity();
            (r - e).norm().min((r + e).norm())
        }
    }
}

/// Lift of the tiling point w on the face with pole a.
fn lift(space: Space, h: Handedness, a: &Vec4, w: &Vec4) -> Vec4 {
    match h {
        Handedness::Right => space.mul(a, w),
        Handedness::Left => space.mul(w, a),
    }
}

/// Pole of G from the pole of F and a matched pair of corners w_F ↔ w_G.
fn transfer(space: Space, h: Handedness, a_f: &Vec4, w_f: &Vec4, w_g: &Vec4) -> Vec4 {
    let g = match h {
        Handedness::Right => space.mul(&space.mul(a_f, w_f), &space.inv(w_g)),
        Handedness::Left => space.mul(&space.mul(&space.inv(w_g), w_f), a_f),
    };
    unit(space, g)
}

/// The two white segments of an edge as (left, right) segment indices.
fn white_pair(t: &FlippableTiling, e: usize) -> Option<(usize, usize)> {
    let segs = &t.edges[e].segments;
    let find = |side: Side| {
        segs.iter().position(|s| s.side == side && t.faces.get(s.face).map(|f| f.color) == Some(Color::White))
    };
    Some((find(Side::Left)?, find(Side::Right)?))
}

/// Develop the white faces into S³ or AdS₃: each white face is lifted to
/// its plane a* by the inverse projection, and poles propagate across
/// edges. The propagation runs breadth-first over the black faces starting
/// from the first one, and every edge is checked at both of its ends.
pub fn develop(t: &FlippableTiling) -> Result<Developed> {
    develop_with(t, &Tolerances::from_env())
}

pub fn develop_with(t: &FlippableTiling, tol: &Tolerances) -> Result<Developed> {
    let space = t.space();
    let h = t.handedness;
    let (nb, nw) = (t.count(Color::Black), t.count(Color::White));
    if t.degenerate || (space == Space::Sphere && (nb == 2 || nw == 2)) {
        let what = if nb == 2 { "hosohedron" } else { "dihedron" };
        return Err(Error::Degenerate(format!("tiling with two {} faces develops to a {what}", if nb == 2 { "black" } else { "white" })));
    }
    let whites: Vec<usize> = t.faces_of(Color::White).collect();
    let mut white_index = vec![usize::MAX; t.faces.len()];
    for (i, &f) in whites.iter().enumerate() {
        white_index[f] = i;
    }
    let pairs: Vec<Option<(usize, usize)>> = (0..t.edges.len()).map(|e| white_pair(t, e)).collect();
    if space == Space::Sphere && pairs.iter().any(|p| p.is_none()) {
        return Err(Error::Geometry("an edge lacks a white segment on one side".into()));
    }
    let mut black_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ei, e) in t.edges.iter().enumerate() {
        for s in &e.segments {
            if t.faces[s.face].color == Color::Black {
                black_edges.entry(s.face).or_default().push(ei);
            }
        }
    }

    let mut poles: Vec<Option<Vec4>> = vec![None; whites.len()];
    let pos = |v: usize| t.vertices[v];
    // Try to place the unplaced white face of edge e; true on progress.
    let step = |e: usize, poles: &mut Vec<Option<Vec4>>| -> bool {
        let Some((sl, sr)) = pairs[e] else { return false };
        let (a, b) = (&t.edges[e].segments[sl], &t.edges[e].segments[sr]);
        let (fa, fb) = (white_index[a.face], white_index[b.face]);
        // The end with smaller coordinates gives the better conditioned product.
        let size = |k: usize| pos(a.v[k]).norm() * pos(b.v[k]).norm();
        let k = if size(1) < size(0) { 1 } else { 0 };
        match (poles[fa], poles[fb]) {
            (Some(pa), None) => {
                poles[fb] = Some(transfer(space, h, &pa, &pos(a.v[k]), &pos(b.v[k])));
                true
            }
            (None, Some(pb)) => {
                poles[fa] = Some(transfer(space, h, &pb, &pos(b.v[k]), &pos(a.v[k])));
                true
            }
            _ => false,
        }
    };

    let seed_edge = black_edges.values().next().and_then(|es| es.iter().copied().find(|&e| pairs[e].is_some()));
    let seed_face = match seed_edge {
        Some(e) => white_index[t.edges[e].segments[pairs[e].unwrap().0].face],
        None => 0,
    };
    if whites.is_empty() {
        return Err(Error::Geometry("tiling has no white face".into()));
    }
    poles[seed_face] = Some(space.identity());

    let mut visited: Vec<bool> = vec![false; t.faces.len()];
    let mut queue: VecDeque<usize> = black_edges.keys().next().copied().into_iter().collect();
    if let Some(&b0) = queue.front() {
        visited[b0] = true;
    }
    while let Some(b) = queue.pop_front() {
        let es = &black_edges[&b];
        loop {
            let mut progress = false;
            for &e in es {
                progress |= step(e, &mut poles);
            }
            if !progress {
                break;
            }
        }
        for &e in es {
            for s in &t.edges[e].segments {
                if t.faces[s.face].color == Color::Black && !visited[s.face] {
                    visited[s.face] = true;
                    queue.push_back(s.face);
                }
            }
        }
    }
    // Faces not reached through black faces (none on closed tilings).
    loop {
        let mut progress = false;
        for e in 0..t.edges.len() {
            progress |= step(e, &mut poles);
        }
        if !progress {
            break;
        }
    }
    let poles: Vec<Vec4> = poles
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::Geometry("white faces are not connected through edges".into())))
        .collect::<Result<_>>()?;

    // Every edge must glue consistently at both of its ends.
    for (e, pair) in pairs.iter().enumerate() {
        let Some((sl, sr)) = *pair else { continue };
        let (a, b) = (&t.edges[e].segments[sl], &t.edges[e].segments[sr]);
        let (pa, pb) = (poles[white_index[a.face]], poles[white_index[b.face]]);
        for k in 0..2 {
            let pred = transfer(space, h, &pa, &pos(a.v[k]), &pos(b.v[k]));
            let err = gap(space, &pred, &pb);
            if !(err <= tol.closure) {
                return Err(Error::Closure(format!("edge {e} glues with mismatch {err:e}")));
            }
        }
    }

    // Vertices: one per black face, then clusters of the remaining corners.
    let corner_lift = |f: usize, k: usize| -> Vec4 {
        let v = t.faces[f].vertices[k];
        let p = lift(space, h, &poles[white_index[f]], &pos(v));
        match space {
            Space::Sphere => p / p.norm(),
            Space::Hyperbolic => canonical_sign(unit(space, p)),
        }
    };
    let mut white_corner: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for &f in &whites {
        for (k, &v) in t.faces[f].vertices.iter().enumerate() {
            white_corner.insert(v, (f, k));
        }
    }
    // Corners of one black face, and the matched ends of the two white
    // sides of an edge, are the same vertex of the surface.
    let mut same = UnionFind::new(t.vertices.len());
    for b in t.faces_of(Color::Black) {
        let c = &t.faces[b].vertices;
        for &v in c {
            same.union(c[0], v);
        }
    }
    for (e, pair) in pairs.iter().enumerate() {
        let Some((sl, sr)) = *pair else { continue };
        let (a, b) = (&t.edges[e].segments[sl], &t.edges[e].segments[sr]);
        for k in 0..2 {
            same.union(a.v[k], b.v[k]);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in white_corner.keys() {
        classes.entry(same.find(v)).or_default().push(v);
    }
    let mut vertices: Vec<Vec4> = Vec::new();
    let mut black_faces: Vec<Option<usize>> = Vec::new();
    let mut vertex_of_corner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut place = |members: &[usize], black: Option<usize>| -> Result<()> {
        let id = vertices.len();
        let mut first: Option<Vec4> = None;
        for &v in members {
            let &(f, k) = white_corner
                .get(&v)
                .ok_or_else(|| Error::Geometry(format!("vertex {v} is not a white corner")))?;
            let x = corner_lift(f, k);
            match first {
                None => first = Some(x),
                Some(x0) => {
                    let err = gap(space, &x, &x0);
                    if !(err <= tol.closure) {
                        return Err(Error::Closure(format!("corners at vertex {id} do not meet (mismatch {err:e})")));
                    }
                }
            }
            vertex_of_corner.insert(v, id);
        }
        vertices.push(first.ok_or_else(|| Error::Geometry("vertex without corners".into()))?);
        black_faces.push(black);
        Ok(())
    };
    for b in t.faces_of(Color::Black) {
        let root = same.find(t.faces[b].vertices[0]);
        let members = classes.remove(&root).ok_or_else(|| Error::Geometry(format!("black face {b} shares a vertex with another black face")))?;
        place(&members, Some(b))?;
    }
    for members in classes.values() {
        place(members, None)?;
    }
    let faces: Vec<Vec<usize>> = whites
        .iter()
        .map(|&f| t.faces[f].vertices.iter().map(|v| vertex_of_corner[v]).collect())
        .collect();
    Ok(Developed { space, handedness: h, white_faces: whites, poles, vertices, faces, black_faces })
}

/// The white polyhedron of a spherical tiling, moved so that its vertex
/// centroid is e (or the pole sum, when the centroid leaves a vertex
/// outside the hemisphere). Vertex i is the apex of the i-th black face and face i
/// is the i-th white face.
pub fn white_polyhedron(t: &FlippableTiling) -> Result<ConvexPolyhedron> {
    if t.space() != Space::Sphere {
        return Err(Error::Geometry("white_polyhedron needs a spherical tiling".into()));
    }
    let d = develop(t)?;
    if d.black_faces.iter().any(|b| b.is_none()) {
        return Err(Error::Geometry("a white corner lies in no black face".into()));
    }
    let c: Vec4 = d.vertices.iter().sum();
    if c.norm() < 1e-9 {
        return Err(Error::Degenerate("vertex centroid vanishes".into()));
    }
    let mut c = c / c.norm();
    if d.vertices.iter().any(|v| c.dot(v) < EPS_HEMI) {
        // Each vertex pairs positively with the inward poles of the faces missing it.
        let a: Vec4 = d.poles.iter().sum();
        c = a / a.norm();
    }
    let g = sphere_inv(&c);
    let vertices = d.vertices.iter().map(|v| sphere_mul(&g, v)).collect();
    let poles = d.poles.iter().map(|a| sphere_mul(&g, a)).collect();
    let faces = d
        .faces
        .into_iter()
        .map(|mut f| {
            rotate_to_min(&mut f);
            f
        })
        .collect();
    ConvexPolyhedron::from_parts(vertices, faces, poles)
}

/// Flip: develop the tiling and project the result with the other map.
/// Vertex indices and face order are preserved.
pub fn flip(t: &FlippableTiling) -> Result<FlippableTiling> {
    let d = develop(t)?;
    let flags: Vec<Vec<usize>> = d.white_faces.iter().map(|&f| t.faces[f].vertices.clone()).collect();
    let complex = FaceComplex {
        space: d.space,
        vertices: d.vertices.clone(),
        faces: d.faces.clone(),
        poles: d.poles.clone(),
        face_weights: d.white_faces.iter().map(|&f| t.faces[f].weight).collect(),
        black: d.black_faces.iter().map(|b| b.is_some()).collect(),
    };
    // A right tiling is the left projection of its white polyhedron.
    let side = t.handedness;
    let (out, _) = project_complex(&complex, side, Some(&flags), t.ambient.clone())?;
    if out.handedness != t.handedness.opposite() {
        return Err(Error::Geometry("flip did not reverse the handedness".into()));
    }
    Ok(recentered(&out))
}
