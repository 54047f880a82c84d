use std::f64::consts::PI;

use serde::Serialize;

use crate::space::Space;
use crate::tol::Tolerances;

use super::{Color, FlippableTiling, Handedness, Position, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Structure,
    Handedness,
    Labels,
    Covering,
    SegmentLengths,
    Convexity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// First violation found, in the order of `ViolationKind`.
    pub violation: Option<Violation>,
    /// Weighted face area, when the checks got that far.
    pub total_area: Option<f64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

type Check = Result<(), Violation>;

fn fail(kind: ViolationKind, message: String) -> Check {
    Err(Violation { kind, message })
}

/// Side on which a segment of the given color and position must lie.
fn expected_side(h: Handedness, color: Color, pos: Position) -> Side {
    let right_black_forward = match (color, pos) {
        (Color::Black, Position::Forward) | (Color::White, Position::Backward) => Side::Right,
        _ => Side::Left,
    };
    match (h, right_black_forward) {
        (Handedness::Right, s) => s,
        (Handedness::Left, Side::Right) => Side::Left,
        (Handedness::Left, Side::Left) => Side::Right,
    }
}

pub fn validate_tiling(t: &FlippableTiling) -> ValidationReport {
    validate_tiling_with(t, &Tolerances::from_env())
}

/// Check every clause of the definition of a flippable tiling and report
/// the first violation.
pub fn validate_tiling_with(t: &FlippableTiling, tol: &Tolerances) -> ValidationReport {
    let mut total_area = None;
    let violation = structure(t, tol)
        .and_then(|_| handedness(t))
        .and_then(|_| labels(t, tol))
        .and_then(|_| {
            total_area = Some(covering(t, tol)?);
            Ok(())
        })
        .and_then(|_| lengths(t, tol))
        .and_then(|_| convexity(t, tol))
        .err();
    ValidationReport { violation, total_area }
}

fn closed(t: &FlippableTiling) -> bool {
    t.space() == Space::Sphere
}

fn structure(t: &FlippableTiling, tol: &Tolerances) -> Check {
    use ViolationKind::Structure as S;
    let nv = t.vertices.len();
    for (fi, f) in t.faces.iter().enumerate() {
        let min = if t.space() == Space::Sphere { 2 } else { 3 };
        if f.vertices.len() < min || f.vertices.iter().any(|&v| v >= nv) {
            return fail(S, format!("face {fi} has an invalid corner list"));
        }
        if !(f.weight > 0.0 && f.weight <= 1.0) {
            return fail(S, format!("face {fi} has weight {}", f.weight));
        }
    }
    let mut seg_count = vec![0usize; t.faces.len()];
    for (ei, e) in t.edges.iter().enumerate() {
        if e.ends.iter().any(|&v| v >= nv) || !(e.length > 0.0) {
            return fail(S, format!("edge {ei} has invalid ends or length"));
        }
        for s in &e.segments {
            if s.face >= t.faces.len() || s.v.iter().any(|&v| v >= nv) {
                return fail(S, format!("edge {ei} references a missing face or vertex"));
            }
            if !(s.t0 >= -tol.len && s.t1 > s.t0 && s.t1 <= e.length + tol.len) {
                return fail(S, format!("edge {ei} has a segment outside [0, length]"));
            }
            seg_count[s.face] += 1;
        }
        for side in [Side::Left, Side::Right] {
            let mut segs: Vec<_> = e.segments.iter().filter(|s| s.side == side).collect();
            segs.sort_by(|a, b| a.t0.total_cmp(&b.t0));
            let colors = |c: Color| segs.iter().filter(|s| t.faces[s.face].color == c).count();
            let (nb, nw) = (colors(Color::Black), colors(Color::White));
            let full = nb == 1 && nw == 1;
            if (closed(t) && !full) || nb > 1 || nw != 1 {
                return fail(S, format!("edge {ei} needs one black and one white segment on each side"));
            }
            if !full {
                continue;
            }
            let (a, b) = (segs[0], segs[1]);
            if a.t0.abs() > tol.len || (a.t1 - b.t0).abs() > tol.len || (b.t1 - e.length).abs() > tol.len {
                return fail(S, format!("edge {ei}: segments do not tile the {side:?} side"));
            }
            if a.v[1] != b.v[0] || a.v[0] != e.ends[0] || b.v[1] != e.ends[1] {
                return fail(S, format!("edge {ei}: segment vertices do not chain on the {side:?} side"));
            }
        }
    }
    for (fi, f) in t.faces.iter().enumerate() {
        if !closed(t) {
            // Patch faces may reach past the edges that were kept.
            if seg_count[fi] > f.vertices.len() {
                return fail(S, format!("face {fi} has more segments than sides"));
            }
            continue;
        }
        if seg_count[fi] != f.vertices.len() {
            return fail(S, format!("face {fi} has {} sides but {} segments", f.vertices.len(), seg_count[fi]));
        }
        for k in 0..f.vertices.len() {
            if t.side_segment(fi, k).is_none() {
                return fail(S, format!("side {k} of face {fi} lies on no edge"));
            }
        }
    }
    let mut corners = vec![[0usize; 2]; nv];
    for f in &t.faces {
        for &v in &f.vertices {
            corners[v][(f.color == Color::White) as usize] += 1;
        }
    }
    for (v, c) in corners.iter().enumerate() {
        let ok = if closed(t) { *c == [1, 1] } else { c[0] <= 1 && c[1] == 1 };
        if !ok {
            return fail(S, format!("vertex {v} is a corner of {} black and {} white faces", c[0], c[1]));
        }
    }
    Ok(())
}

fn handedness(t: &FlippableTiling) -> Check {
    for (ei, e) in t.edges.iter().enumerate() {
        for s in &e.segments {
            let color = t.faces[s.face].color;
            if s.side != expected_side(t.handedness, color, s.position) {
                return fail(
                    ViolationKind::Handedness,
                    format!("edge {ei}: {color:?} {:?} segment on the {:?} side of a {:?} tiling", s.position, s.side, t.handedness),
                );
            }
        }
    }
    Ok(())
}

fn labels(t: &FlippableTiling, tol: &Tolerances) -> Check {
    use ViolationKind::Labels as L;
    let space = t.space();
    for (ei, e) in t.edges.iter().enumerate() {
        let n = space.normal_of(&e.origin, &e.dir);
        for s in &e.segments {
            let at_end = (s.t1 - e.length).abs() <= tol.len;
            let at_start = s.t0.abs() <= tol.len;
            let want = if at_end { Position::Forward } else { Position::Backward };
            if s.position != want || (!at_end && !at_start) {
                return fail(L, format!("edge {ei}: segment of face {} labeled {:?}", s.face, s.position));
            }
            // Midpoints of the other sides of the face lie on the labeled side.
            let f = &t.faces[s.face];
            for k in 0..f.vertices.len() {
                let Some((e2, s2)) = t.side_segment(s.face, k) else { continue };
                if e2 == ei {
                    continue;
                }
                let o = &t.edges[e2].segments[s2];
                let m = t.edges[e2].point(space, 0.5 * (o.t0 + o.t1));
                let sign = space.dot(&m, &n);
                let ok = match s.side {
                    Side::Left => sign > -tol.incidence,
                    Side::Right => sign < tol.incidence,
                };
                if !ok {
                    return fail(L, format!("edge {ei}: face {} is not on its {:?} side", s.face, s.side));
                }
            }
        }
    }
    Ok(())
}

fn covering(t: &FlippableTiling, tol: &Tolerances) -> Result<f64, Violation> {
    use ViolationKind::Covering as C;
    let space = t.space();
    let e = space.identity();
    for (v, p) in t.vertices.iter().enumerate() {
        let off = (space.dot(p, p) - space.curvature()).abs() + space.dot(&e, p).abs();
        if off > tol.incidence * (1.0 + p.norm()) {
            return Err(Violation { kind: C, message: format!("vertex {v} is off the surface") });
        }
    }
    for (ei, edge) in t.edges.iter().enumerate() {
        for s in &edge.segments {
            for (k, tv) in [s.t0, s.t1].into_iter().enumerate() {
                let q = edge.point(space, tv);
                let d = space.dist(&q, &t.vertices[s.v[k]]);
                if !(d <= tol.incidence) {
                    return Err(Violation {
                        kind: C,
                        message: format!("edge {ei}: vertex {} is {d:e} away from its place on the edge", s.v[k]),
                    });
                }
            }
        }
    }
    let mut angle_sum = vec![0.0; t.vertices.len()];
    let mut count = vec![0usize; t.vertices.len()];
    let mut area = 0.0;
    for (fi, f) in t.faces.iter().enumerate() {
        let mut angles = Vec::with_capacity(f.vertices.len());
        for k in 0..f.vertices.len() {
            let a = t
                .corner_angle(fi, k)
                .map_err(|err| Violation { kind: C, message: err.to_string() })?;
            angle_sum[f.vertices[k]] += a;
            count[f.vertices[k]] += 1;
            angles.push(a);
        }
        area += f.weight * space.polygon_area(&angles);
    }
    for v in 0..t.vertices.len() {
        if count[v] == 2 && (angle_sum[v] - PI).abs() > tol.angle {
            return Err(Violation {
                kind: C,
                message: format!("corner angles at vertex {v} add up to {} instead of π", angle_sum[v]),
            });
        }
    }
    let budget = t.ambient.area_budget();
    if (area - budget).abs() > tol.area * budget.max(1.0) {
        return Err(Violation { kind: C, message: format!("faces cover area {area}, expected {budget}") });
    }
    Ok(area)
}

fn lengths(t: &FlippableTiling, tol: &Tolerances) -> Check {
    for (ei, e) in t.edges.iter().enumerate() {
        for color in [Color::Black, Color::White] {
            let l: Vec<f64> = e.segments.iter().filter(|s| t.faces[s.face].color == color).map(|s| s.t1 - s.t0).collect();
            if l.len() == 2 && (l[0] - l[1]).abs() > tol.len {
                return fail(
                    ViolationKind::SegmentLengths,
                    format!("edge {ei}: {color:?} segments have lengths {} and {}", l[0], l[1]),
                );
            }
        }
    }
    Ok(())
}

fn convexity(t: &FlippableTiling, tol: &Tolerances) -> Check {
    let space = t.space();
    for (fi, f) in t.faces.iter().enumerate() {
        for k in 0..f.vertices.len() {
            let Ok((out, back)) = t.corner_tangents(fi, k) else {
                return fail(ViolationKind::Convexity, format!("face {fi}: corner {k} has no tangents"));
            };
            let p = t.vertices[f.vertices[k]];
            let turn = space.orient(&p, &out, &back);
            let angle = space.angle_between(&p, &out, &back);
            if turn <= 0.0 || angle > PI - tol.angle.min(1e-12) {
                return fail(ViolationKind::Convexity, format!("face {fi} is not convex at corner {k}"));
            }
        }
    }
    Ok(())
}
