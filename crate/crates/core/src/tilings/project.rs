use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{QuadricPoint, Signature, Vec4};
use crate::polyhedra::ConvexPolyhedron;
use crate::space::Space;

use super::{
    cycle_of, cycles_from_segments, next_maps, sort_edges, sort_faces, Ambient, Color, Face, FlippableTiling, Handedness, Position,
    ProjectionSide, Segment, Side, TilingEdge,
};

/// Images of a point of a* ∪ b* under the projection of the angle A.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleImage {
    /// Image through a, when x lies on a*.
    pub from_a: Option<Vec4>,
    /// Image through b, when x lies on b*.
    pub from_b: Option<Vec4>,
}

fn project_point(space: Space, a: &Vec4, x: &Vec4, side: ProjectionSide) -> Vec4 {
    let ai = space.inv(a);
    let p = match side {
        Handedness::Left => space.mul(&ai, x),
        Handedness::Right => space.mul(x, &ai),
    };
    space.canonical(p)
}

/// Left (x ↦ a⁻¹x) or right (x ↦ xa⁻¹) projection of a point of the angle
/// bounded by the planes a* and b*. A point of the edge E = a* ∩ b* gets
/// both images.
pub fn angle_project(a: &QuadricPoint, b: &QuadricPoint, x: &Vec4, side: ProjectionSide) -> Result<AngleImage> {
    let space = match (a.sig(), b.sig()) {
        (Signature::Sphere, Signature::Sphere) => Space::Sphere,
        (Signature::Ads, Signature::Ads) => Space::Hyperbolic,
        _ => return Err(Error::Geometry("angle projection needs two points of S³ or of AdS₃".into())),
    };
    let (av, bv) = (a.v(), b.v());
    if (av - bv).norm() < 1e-12 || (av + bv).norm() < 1e-12 {
        return Err(Error::Degenerate("a = ±b: the angle is a digon".into()));
    }
    let tol = 1e-9 * (1.0 + x.norm());
    let on_a = space.dot(&av, x).abs() <= tol;
    let on_b = space.dot(&bv, x).abs() <= tol;
    if !on_a && !on_b {
        return Err(Error::Geometry("point is on neither face plane".into()));
    }
    Ok(AngleImage {
        from_a: on_a.then(|| project_point(space, &av, x, side)),
        from_b: on_b.then(|| project_point(space, &bv, x, side)),
    })
}

/// Polyhedral data to project: faces are counter-clockwise cycles seen
/// from their poles. `black[v]` says whether vertex v gets a black face;
/// patches of equivariant surfaces leave boundary vertices without one.
#[derive(Clone, Debug)]
pub struct FaceComplex {
    pub space: Space,
    pub vertices: Vec<Vec4>,
    pub faces: Vec<Vec<usize>>,
    pub poles: Vec<Vec4>,
    pub face_weights: Vec<f64>,
    pub black: Vec<bool>,
}

impl FaceComplex {
    pub fn from_polyhedron(p: &ConvexPolyhedron) -> Self {
        FaceComplex {
            space: Space::Sphere,
            vertices: p.vertices.clone(),
            faces: p.faces.clone(),
            poles: p.poles.clone(),
            face_weights: vec![1.0; p.faces.len()],
            black: vec![true; p.vertices.len()],
        }
    }
}

/// Where the pieces of the source complex went in the tiling.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionMap {
    /// Tiling face of each source face.
    pub white_of_face: Vec<usize>,
    /// Tiling face of each source vertex that has a black face.
    pub black_of_vertex: Vec<Option<usize>>,
    /// Tiling vertex of corner k of source face f.
    pub flag_vertex: Vec<Vec<usize>>,
    /// Tiling edge of each source edge [a, b] (a < b) with both faces present.
    pub edge_of: BTreeMap<[usize; 2], usize>,
}

/// Left or right projection of a convex spherical polyhedron. The LEFT
/// projection gives a RIGHT flippable tiling and vice versa.
pub fn project(p: &ConvexPolyhedron, side: ProjectionSide) -> Result<(FlippableTiling, ProjectionMap)> {
    project_complex(&FaceComplex::from_polyhedron(p), side, None, Ambient::Sphere)
}

/// Projection of a face complex. `flag_ids`, when given, fixes the tiling
/// vertex index of every face corner; otherwise corners are numbered in
/// face order.
pub fn project_complex(
    c: &FaceComplex,
    side: ProjectionSide,
    flag_ids: Option<&[Vec<usize>]>,
    ambient: Ambient,
) -> Result<(FlippableTiling, ProjectionMap)> {
    let space = c.space;
    if ambient.space() != space {
        return Err(Error::Geometry("ambient does not match the complex".into()));
    }
    let flag_vertex: Vec<Vec<usize>> = match flag_ids {
        Some(ids) => ids.to_vec(),
        None => {
            let mut n = 0;
            c.faces
                .iter()
                .map(|f| {
                    let ids: Vec<usize> = (n..n + f.len()).collect();
                    n += f.len();
                    ids
                })
                .collect()
        }
    };
    let n_vertices = flag_vertex.iter().flatten().max().map_or(0, |m| m + 1);
    let mut vertices = vec![Vec4::zeros(); n_vertices];
    let mut corner_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, f) in c.faces.iter().enumerate() {
        for (k, &x) in f.iter().enumerate() {
            let p = project_point(space, &c.poles[fi], &c.vertices[x], side);
            if space.dot(&space.identity(), &p).abs() > 1e-8 {
                return Err(Error::Geometry(format!("vertex {x} is not on the plane of face {fi}")));
            }
            vertices[flag_vertex[fi][k]] = p;
            corner_of.insert((fi, x), flag_vertex[fi][k]);
        }
    }

    let mut dir: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, f) in c.faces.iter().enumerate() {
        for k in 0..f.len() {
            dir.insert((f[k], f[(k + 1) % f.len()]), fi);
        }
    }
    let n_white = c.faces.len();
    let mut black_face: Vec<Option<usize>> = vec![None; c.vertices.len()];
    let mut nb = 0;
    for (x, b) in c.black.iter().enumerate() {
        if *b {
            black_face[x] = Some(n_white + nb);
            nb += 1;
        }
    }

    let mut edges = Vec::new();
    let mut edge_src: Vec<[usize; 2]> = Vec::new();
    let mut handedness: Option<Handedness> = None;
    for (&(x, y), &f0) in &dir {
        if x > y {
            continue;
        }
        let Some(&f1) = dir.get(&(y, x)) else { continue };
        let (wx0, wy0) = (corner_of[&(f0, x)], corner_of[&(f0, y)]);
        let (wx1, wy1) = (corner_of[&(f1, x)], corner_of[&(f1, y)]);
        let p0 = vertices[wx0];
        let d = space.tangent_toward(&p0, &vertices[wy0])?;
        let len = space.dist(&p0, &vertices[wy0]);
        let tau = space.param_of(&p0, &d, &vertices[wx1]);
        if tau.abs() < 1e-12 {
            return Err(Error::Degenerate(format!("zero dihedral angle on edge ({x},{y})")));
        }
        let h = if tau < 0.0 { Handedness::Right } else { Handedness::Left };
        if handedness.is_some_and(|g| g != h) {
            return Err(Error::Geometry("projected edges disagree on handedness".into()));
        }
        handedness = Some(h);
        let start = tau.min(0.0);
        let length = len + tau.abs();
        let fwd = |hi: f64| if hi - start >= length - 1e-15 * (1.0 + length) { Position::Forward } else { Position::Backward };
        let seg = |face: usize, side: Side, lo: f64, hi: f64, v: [usize; 2]| Segment {
            face,
            side,
            position: fwd(hi),
            t0: lo - start,
            t1: hi - start,
            v,
        };
        let mut segments = vec![
            seg(f0, Side::Left, 0.0, len, [wx0, wy0]),
            seg(f1, Side::Right, tau, tau + len, [wx1, wy1]),
        ];
        if let Some(bx) = black_face[x] {
            segments.push(if tau > 0.0 {
                seg(bx, Side::Right, 0.0, tau, [wx0, wx1])
            } else {
                seg(bx, Side::Left, tau, 0.0, [wx1, wx0])
            });
        }
        if let Some(by) = black_face[y] {
            segments.push(if tau > 0.0 {
                seg(by, Side::Left, len, len + tau, [wy0, wy1])
            } else {
                seg(by, Side::Right, len + tau, len, [wy1, wy0])
            });
        }
        for s in &mut segments {
            // Pin the ends exactly.
            if s.position == Position::Forward {
                s.t1 = length;
            }
            if s.t0.abs() < 1e-15 {
                s.t0 = 0.0;
            }
        }
        let ends = if tau > 0.0 { [wx0, wy1] } else { [wx1, wy0] };
        edges.push(TilingEdge {
            ends,
            origin: space.geodesic(&p0, &d, start),
            dir: space.geodesic_tangent(&p0, &d, start),
            length,
            segments,
        });
        edge_src.push([x, y]);
    }
    let handedness = handedness.ok_or_else(|| Error::Degenerate("complex has no interior edge".into()))?;

    let n_faces = n_white + nb;
    let first = |f: usize| (f < n_white).then(|| flag_vertex[f][0]);
    let patch = c.black.iter().any(|b| !b);
    let cycles = if patch {
        // White faces on the rim of a patch miss some sides: their cycles
        // come from the corners, and each present side must follow them.
        let next = next_maps(n_faces, &edges)?;
        let mut cycles = Vec::with_capacity(n_faces);
        for (fi, nx) in next.iter().enumerate() {
            if fi < n_white {
                let cyc = &flag_vertex[fi];
                let m = cyc.len();
                let follows = nx.iter().all(|(a, b)| cyc.iter().position(|v| v == a).is_some_and(|k| cyc[(k + 1) % m] == *b));
                if !follows {
                    return Err(Error::Geometry(format!("face {fi} is not counter-clockwise")));
                }
                cycles.push(cyc.clone());
            } else {
                cycles.push(cycle_of(fi, nx, None)?);
            }
        }
        cycles
    } else {
        cycles_from_segments(n_faces, &edges, &first)?
    };
    for (fi, cyc) in cycles.iter().take(n_white).enumerate() {
        if cyc != &flag_vertex[fi] {
            return Err(Error::Geometry(format!("face {fi} is not counter-clockwise")));
        }
    }
    let mut faces: Vec<Face> = cycles
        .into_iter()
        .enumerate()
        .map(|(f, vertices)| {
            let (color, weight) = if f < n_white { (Color::White, c.face_weights[f]) } else { (Color::Black, 1.0) };
            Face { color, vertices, weight }
        })
        .collect();
    for f in faces.iter_mut().filter(|f| f.color == Color::Black) {
        crate::polyhedra::rotate_to_min(&mut f.vertices);
    }
    let new_of = sort_faces(&mut faces, &mut edges);
    let mut keyed: Vec<(TilingEdge, [usize; 2])> = edges.into_iter().zip(edge_src).collect();
    keyed.sort_by_key(|(e, _)| (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1])));
    let edge_of = keyed.iter().enumerate().map(|(i, (_, k))| (*k, i)).collect();
    let mut edges: Vec<TilingEdge> = keyed.into_iter().map(|(e, _)| e).collect();
    sort_edges(&mut edges);

    let degenerate = ambient == Ambient::Sphere && (nb == 2 || n_white == 2);
    let t = FlippableTiling { handedness, ambient, vertices, faces, edges, degenerate };
    let map = ProjectionMap {
        white_of_face: (0..n_white).map(|f| new_of[f]).collect(),
        black_of_vertex: black_face.iter().map(|b| b.map(|f| new_of[f])).collect(),
        flag_vertex,
        edge_of,
    };
    Ok((t, map))
}
