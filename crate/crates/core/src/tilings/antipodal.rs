use crate::error::Result;
use crate::forms::Vec4;
use crate::polyhedra::SphericalPolygon;
use crate::space::Space;

use super::{
    cycles_from_segments, sort_edges, sort_faces, Ambient, Color, Face, FlippableTiling, Handedness, Position,
    Segment, Side, TilingEdge,
};

/// Tiling of S² by a convex polygon P, its antipode −P (black) and the
/// digons joining each vertex vᵢ to −vᵢ (white). The sides of P extend to
/// great circles; `side` picks which pair of lunes at each vertex becomes
/// the white digon, and is the handedness of the result.
///
/// Vertex 2i is vᵢ and vertex 2i+1 is −vᵢ.
pub fn make_antipodal_tiling(p: &SphericalPolygon, side: Handedness) -> Result<FlippableTiling> {
    let s = Space::Sphere;
    let n = p.vertices.len();
    let v: Vec<Vec4> = p.vertices.iter().map(|x| s.from3(x)).collect();
    let d: Vec<Vec4> = p.dirs.iter().map(|x| s.from3(x)).collect();
    let pi = std::f64::consts::PI;
    let mut vertices = Vec::with_capacity(2 * n);
    for x in &v {
        vertices.push(*x);
        vertices.push(-x);
    }
    // Faces before sorting: 0 = P, 1 = −P, 2 + i = digon at vᵢ.
    let (fp, fm) = (0, 1);
    let digon = |i: usize| 2 + i % n;
    let seg = |face, side, position, t0, t1, v: [usize; 2]| Segment { face, side, position, t0, t1, v };
    use Position::{Backward as B, Forward as F};
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let l = p.lengths[i];
        let length = pi + l;
        let (a, a2, b, b2) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
        let edge = match side {
            Handedness::Right => TilingEdge {
                ends: [a, b2],
                origin: v[i],
                dir: d[i],
                length,
                segments: vec![
                    seg(fp, Side::Left, B, 0.0, l, [a, b]),
                    seg(digon(j), Side::Left, F, l, length, [b, b2]),
                    seg(digon(i), Side::Right, B, 0.0, pi, [a, a2]),
                    seg(fm, Side::Right, F, pi, length, [a2, b2]),
                ],
            },
            Handedness::Left => TilingEdge {
                ends: [b, a2],
                origin: v[j],
                dir: -s.geodesic_tangent(&v[i], &d[i], l),
                length,
                segments: vec![
                    seg(fp, Side::Right, B, 0.0, l, [b, a]),
                    seg(digon(i), Side::Right, F, l, length, [a, a2]),
                    seg(digon(j), Side::Left, B, 0.0, pi, [b, b2]),
                    seg(fm, Side::Left, F, pi, length, [b2, a2]),
                ],
            },
        };
        edges.push(edge);
    }
    let cycles = cycles_from_segments(n + 2, &edges, &|_| None)?;
    let mut faces: Vec<Face> = cycles
        .into_iter()
        .enumerate()
        .map(|(f, vertices)| Face { color: if f < 2 { Color::Black } else { Color::White }, vertices, weight: 1.0 })
        .collect();
    sort_faces(&mut faces, &mut edges);
    sort_edges(&mut edges);
    Ok(FlippableTiling { handedness: side, ambient: Ambient::Sphere, vertices, faces, edges, degenerate: true })
}
