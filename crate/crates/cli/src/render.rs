//! Deterministic SVG output for tilings.

use std::fmt::Write;

use flipkit::space::Space;
use flipkit::tilings::{Color, FlippableTiling, Side};
use flipkit::{Error, Result, Vec4};
use nalgebra::{Vector2, Vector3};

/// Largest step along a geodesic between two samples.
pub const SAMPLE_STEP: f64 = 0.01;
/// Smallest angular distance allowed between the stereographic pole and an edge.
pub const POLE_CLEARANCE: f64 = 0.05;
const FIBONACCI_CANDIDATES: usize = 200;
const SIZE: f64 = 800.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Stereographic,
    Poincare,
}

fn geodesic_samples(space: Space, p: &Vec4, q: &Vec4) -> Result<Vec<Vec4>> {
    let d = space.tangent_toward(p, q)?;
    let len = space.dist(p, q);
    Ok(sample(space, p, &d, 0.0, len))
}

/// Points along the geodesic through p with direction d, from t0 to t1.
fn sample(space: Space, p: &Vec4, d: &Vec4, t0: f64, t1: f64) -> Vec<Vec4> {
    let n = ((t1 - t0).abs() / SAMPLE_STEP).ceil().max(1.0) as usize;
    (0..=n).map(|i| space.geodesic(p, d, t0 + (t1 - t0) * i as f64 / n as f64)).collect()
}

/// Closed boundary of face f, counter-clockwise on the surface.
fn face_boundary(t: &FlippableTiling, f: usize) -> Result<Vec<Vec4>> {
    let space = t.space();
    let c = &t.faces[f].vertices;
    let mut pts = Vec::new();
    for k in 0..c.len() {
        let mut side = match t.side_segment(f, k) {
            Some((e, s)) => {
                let (edge, seg) = (&t.edges[e], &t.edges[e].segments[s]);
                match seg.side {
                    Side::Left => sample(space, &edge.origin, &edge.dir, seg.t0, seg.t1),
                    Side::Right => sample(space, &edge.origin, &edge.dir, seg.t1, seg.t0),
                }
            }
            None => geodesic_samples(space, &t.vertices[c[k]], &t.vertices[c[(k + 1) % c.len()]])?,
        };
        side.pop();
        pts.extend(side);
    }
    Ok(pts)
}

fn edge_path(t: &FlippableTiling, e: usize) -> Vec<Vec4> {
    let edge = &t.edges[e];
    sample(t.space(), &edge.origin, &edge.dir, 0.0, edge.length)
}

fn unit(v: Vector3<f64>) -> Vector3<f64> {
    v / v.norm()
}

fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            Vector3::new(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

fn clearance(pole: &Vector3<f64>, pts: &[Vector3<f64>]) -> f64 {
    pts.iter().map(|u| u.dot(pole).clamp(-1.0, 1.0).acos()).fold(f64::INFINITY, f64::min)
}

/// Pole at (0, 0, -1), moved to the best-separated candidate when an edge passes too close.
fn choose_pole(edge_pts: &[Vector3<f64>]) -> Vector3<f64> {
    let default = Vector3::new(0.0, 0.0, -1.0);
    if clearance(&default, edge_pts) >= POLE_CLEARANCE {
        return default;
    }
    let mut best = (clearance(&default, edge_pts), default);
    for c in fibonacci_sphere(FIBONACCI_CANDIDATES) {
        let cl = clearance(&c, edge_pts);
        if cl > best.0 {
            best = (cl, c);
        }
    }
    best.1
}

struct Stereo {
    pole: Vector3<f64>,
    a: Vector3<f64>,
    b: Vector3<f64>,
}

impl Stereo {
    fn new(pole: Vector3<f64>) -> Self {
        let helper = if pole.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let a = unit(helper - pole * pole.dot(&helper));
        // (a, b, -pole) is positively oriented, so the view from -pole keeps orientation.
        let b = (-pole).cross(&a);
        Stereo { pole, a, b }
    }

    fn map(&self, u: &Vector3<f64>) -> Vector2<f64> {
        let s = 1.0 - u.dot(&self.pole);
        Vector2::new(u.dot(&self.a) / s, u.dot(&self.b) / s)
    }
}

fn signed_area(pts: &[Vector2<f64>]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y).sum::<f64>() / 2.0
}

fn path_data(pts: &[Vector2<f64>], scale: f64, closed: bool) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(s, "{cmd}{:.4},{:.4}", p.x * scale, -p.y * scale);
    }
    if closed {
        s.push('Z');
    }
    s
}

fn fill(c: Color) -> (&'static str, &'static str) {
    match c {
        Color::Black => ("face black", "#333333"),
        Color::White => ("face white", "#f2f2f2"),
    }
}

/// SVG picture of a tiling: spheres by stereographic projection, hyperbolic
/// patches in the Poincaré disk.
pub fn render_svg(t: &FlippableTiling, projection: Projection) -> Result<String> {
    let space = t.space();
    match (space, projection) {
        (Space::Sphere, Projection::Stereographic) | (Space::Hyperbolic, Projection::Poincare) => {}
        _ => {
            return Err(Error::Geometry(format!(
                "{projection:?} projection does not apply to a {space:?} tiling"
            )))
        }
    }
    let faces: Vec<Vec<Vector3<f64>>> = (0..t.faces.len())
        .map(|f| Ok(face_boundary(t, f)?.iter().map(|p| space.to3(p)).collect()))
        .collect::<Result<_>>()?;
    let edges: Vec<Vec<Vector3<f64>>> =
        (0..t.edges.len()).map(|e| edge_path(t, e).iter().map(|p| space.to3(p)).collect()).collect();

    let (face_pts, edge_pts, radius): (Vec<Vec<Vector2<f64>>>, Vec<Vec<Vector2<f64>>>, f64) = match projection {
        Projection::Stereographic => {
            let all: Vec<Vector3<f64>> = edges.iter().flatten().map(|u| unit(*u)).collect();
            let st = Stereo::new(choose_pole(&all));
            let fp: Vec<Vec<_>> = faces.iter().map(|f| f.iter().map(|u| st.map(&unit(*u))).collect()).collect();
            let ep: Vec<Vec<_>> = edges.iter().map(|e| e.iter().map(|u| st.map(&unit(*u))).collect()).collect();
            let r = ep.iter().flatten().map(|p| p.norm()).fold(0.0, f64::max);
            (fp, ep, (1.05 * r).clamp(1.2, 50.0))
        }
        Projection::Poincare => {
            let disk = |u: &Vector3<f64>| Vector2::new(u.x, u.y) / (1.0 + u.z);
            let fp = faces.iter().map(|f| f.iter().map(disk).collect()).collect();
            let ep = edges.iter().map(|e| e.iter().map(disk).collect()).collect();
            (fp, ep, 1.05)
        }
    };

    let scale = SIZE / (2.0 * radius);
    let half = SIZE / 2.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {SIZE:.4} {SIZE:.4}\" width=\"{SIZE}\" height=\"{SIZE}\">",
        -half, -half
    );
    let _ = writeln!(svg, "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{SIZE:.4}\" height=\"{SIZE:.4}\" fill=\"#ffffff\"/>", -half, -half);
    if projection == Projection::Poincare {
        let _ = writeln!(svg, "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"{scale:.4}\" fill=\"none\" stroke=\"#999999\"/>");
    }
    for (f, pts) in face_pts.iter().enumerate() {
        let (class, color) = fill(t.faces[f].color);
        let d = path_data(pts, scale, true);
        if projection == Projection::Stereographic && signed_area(pts) < 0.0 {
            // The face holding the pole is the outside of its boundary.
            let frame = format!("M{0:.4},{0:.4}L{1:.4},{0:.4}L{1:.4},{1:.4}L{0:.4},{1:.4}Z", -half, half);
            let _ = writeln!(
                svg,
                "<path class=\"{class}\" data-face=\"{f}\" fill=\"{color}\" fill-rule=\"evenodd\" d=\"{frame}{d}\"/>"
            );
        } else {
            let _ = writeln!(svg, "<path class=\"{class}\" data-face=\"{f}\" fill=\"{color}\" d=\"{d}\"/>");
        }
    }
    for (e, pts) in edge_pts.iter().enumerate() {
        let d = path_data(pts, scale, false);
        let _ = writeln!(
            svg,
            "<path class=\"edge\" data-edge=\"{e}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" d=\"{d}\"/>"
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
