use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{ads_form, cross4, Vec4};

use super::hull::FuchsianSurface;
use super::pyramid::ads_face_angle;

const J: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

/// Unit time-like normal of the plane through a, b, c, on the same side
/// as `side` (⟨n, side⟩ < 0).
pub fn plane_pole(a: &Vec4, b: &Vec4, c: &Vec4, side: &Vec4) -> Result<Vec4> {
    let k = cross4(a, b, c);
    let n = Vec4::new(J[0] * k[0], J[1] * k[1], J[2] * k[2], J[3] * k[3]);
    let q = ads_form(&n, &n);
    if !(q < 0.0) {
        return Err(Error::Geometry(format!("plane is not space-like (⟨n,n⟩ = {q})")));
    }
    let n = n / (-q).sqrt();
    Ok(if ads_form(&n, side) < 0.0 { n } else { -n })
}

/// Area of a convex polygon lying on {⟨y,y⟩₂ = −1} in a space-like plane.
pub fn polygon_area(v: &[Vec4]) -> f64 {
    let m = v.len();
    let angles: f64 = (0..m).map(|i| ads_face_angle(&v[i], &v[(i + m - 1) % m], &v[(i + 1) % m])).sum();
    (m as f64 - 2.0) * PI - angles
}

/// Foot of the reflected ray of vertex i on the plane dual to it, and the
/// ray's unit tangent there.
pub fn reflected_ray_foot(s: &FuchsianSurface, i: usize) -> (Vec4, Vec4) {
    let p = s.rays[i];
    let t = std::f64::consts::FRAC_PI_2 - s.heights[i];
    let (c, sn) = (t.cos(), t.sin());
    let foot = Vec4::new(c * p[0], c * p[1], c * p[2], -sn);
    let tangent = Vec4::new(-sn * p[0], -sn * p[1], -sn * p[2], -c);
    (foot, tangent)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualFace {
    pub vertex: usize,
    /// Poles of the faces around the vertex, in the order of its star.
    pub corners: Vec<Vec4>,
    pub area: f64,
    /// Unit normal of the plane of the dual face.
    pub normal: Vec4,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiDual {
    pub faces: Vec<DualFace>,
}

/// Polar dual of the surface: the face dual to vertex i is spanned by the
/// poles of the faces around it and lies on the side of the reflected ray.
pub fn minkowski_dual(s: &FuchsianSurface) -> Result<MinkowskiDual> {
    let mut faces = Vec::with_capacity(s.n());
    for i in 0..s.n() {
        let (foot, _) = reflected_ray_foot(s, i);
        let corners = s.stars[i]
            .faces
            .iter()
            .map(|f| plane_pole(&s.point(f[0]), &s.point(f[1]), &s.point(f[f.len() - 1]), &foot))
            .collect::<Result<Vec<_>>>()?;
        if corners.len() < 3 {
            return Err(Error::Degenerate(format!("vertex {i} has fewer than three faces")));
        }
        let m = corners.len();
        let normal = plane_pole(&corners[0], &corners[m / 3], &corners[(2 * m) / 3], &s.point(s.rep(i)))?;
        let normal = if normal[3] < 0.0 { -normal } else { normal };
        let area = polygon_area(&corners);
        faces.push(DualFace { vertex: i, corners, area, normal });
    }
    Ok(MinkowskiDual { faces })
}

impl MinkowskiDual {
    /// max |area_i + k_i|.
    pub fn area_error(&self, k: &[f64]) -> f64 {
        self.faces.iter().zip(k).map(|(f, k)| (f.area + k).abs()).fold(0.0, f64::max)
    }

    /// Distance between the poles of the dual faces and the original vertices.
    pub fn double_dual_error(&self, s: &FuchsianSurface) -> f64 {
        self.faces
            .iter()
            .map(|f| (f.normal - s.point(s.rep(f.vertex))).amax())
            .fold(0.0, f64::max)
    }

    /// max over i of 1 − |⟨normal_i, tangent of the reflected ray⟩₂| and the
    /// distance of the foot to the plane of the dual face.
    pub fn orthogonality_error(&self, s: &FuchsianSurface) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let (foot, tangent) = reflected_ray_foot(s, f.vertex);
                let c = ads_form(&f.normal, &tangent).abs();
                (1.0 - c).abs().max(ads_form(&f.normal, &foot).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn corner_residual(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| f.corners.iter().map(move |c| (ads_form(c, c) + 1.0).abs().max(ads_form(c, &f.normal).abs())))
            .fold(0.0, f64::max)
    }
}

/// Induced area of a fundamental domain: each face counted once per orbit.
pub fn fundamental_area(s: &FuchsianSurface) -> f64 {
    (0..s.n())
        .flat_map(|i| s.stars[i].faces.iter())
        .map(|f| {
            let v: Vec<Vec4> = f.iter().map(|&q| s.point(q)).collect();
            polygon_area(&v) / f.len() as f64
        })
        .sum()
}
