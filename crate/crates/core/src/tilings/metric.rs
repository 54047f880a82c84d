use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::UnionFind;

use super::{Color, FlippableTiling};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConePoint {
    /// Face of the other color that collapses to this point.
    pub face: usize,
    /// Tiling vertices glued together at the point.
    pub corners: Vec<usize>,
    pub angle: f64,
}

/// Cone metric obtained by gluing the faces of one color along the edges.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeMetric {
    pub curvature: f64,
    pub color: Color,
    /// Glued faces of the tiling.
    pub faces: Vec<usize>,
    pub cone_points: Vec<ConePoint>,
}

impl ConeMetric {
    /// Singular curvature 2π − θ at each cone point.
    pub fn singular_curvatures(&self) -> Vec<f64> {
        self.cone_points.iter().map(|c| 2.0 * std::f64::consts::PI - c.angle).collect()
    }
}

/// Metric of the black faces glued along their common edges; its cone
/// points are the white faces.
pub fn black_metric(t: &FlippableTiling) -> Result<ConeMetric> {
    glue(t, Color::Black)
}

/// Metric of the white faces glued along their common edges; its cone
/// points are the black faces.
pub fn white_metric(t: &FlippableTiling) -> Result<ConeMetric> {
    glue(t, Color::White)
}

fn glue(t: &FlippableTiling, color: Color) -> Result<ConeMetric> {
    let nv = t.vertices.len();
    let mut uf = UnionFind::new(nv);
    for e in &t.edges {
        let segs: Vec<_> = e.segments.iter().filter(|s| t.faces[s.face].color == color).collect();
        if let [a, b] = segs[..] {
            uf.union(a.v[0], b.v[0]);
            uf.union(a.v[1], b.v[1]);
        }
    }
    let mut angle_at = vec![None; nv];
    for f in t.faces_of(color) {
        for k in 0..t.faces[f].vertices.len() {
            angle_at[t.faces[f].vertices[k]] = Some(t.corner_angle(f, k)?);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        classes.entry(uf.find(v)).or_default().push(v);
    }
    let mut cone_points = Vec::new();
    for f in t.faces_of(color.other()) {
        let mut corners = t.faces[f].vertices.clone();
        corners.sort_unstable();
        let class = &classes[&uf.find(corners[0])];
        if *class != corners {
            if t.space() == crate::space::Space::Sphere {
                return Err(Error::Geometry(format!("corners glued around face {f} do not match its corners")));
            }
            // Patch boundary: the point is not surrounded.
            continue;
        }
        let mut angle = 0.0;
        for &v in &corners {
            match angle_at[v] {
                Some(a) => angle += a,
                None if t.space() == crate::space::Space::Sphere => {
                    return Err(Error::Geometry(format!("vertex {v} has no {color:?} corner")))
                }
                None => {
                    angle = f64::NAN;
                    break;
                }
            }
        }
        if angle.is_finite() {
            cone_points.push(ConePoint { face: f, corners, angle });
        }
    }
    Ok(ConeMetric {
        curvature: t.space().curvature(),
        color,
        faces: t.faces_of(color).collect(),
        cone_points,
    })
}
