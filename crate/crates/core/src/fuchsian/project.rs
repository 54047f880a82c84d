use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::Vec4;
use crate::space::Space;
use crate::tilings::{project_complex, FaceComplex, FlippableTiling, Handedness, ProjectionMap};

use super::dual::plane_pole;
use super::hull::{FuchsianSurface, OrbitPoint};

/// Patch of the surface made of the stars of the fundamental vertices.
/// Vertices 0..n are the fundamental vertices; only they get black faces.
/// A face weighs the share of its corners that are fundamental.
pub fn star_complex(s: &FuchsianSurface) -> Result<(FaceComplex, Vec<OrbitPoint>)> {
    let mut index: BTreeMap<OrbitPoint, usize> = BTreeMap::new();
    let mut points: Vec<OrbitPoint> = (0..s.n()).map(|i| s.rep(i)).collect();
    for (i, &q) in points.iter().enumerate() {
        index.insert(q, i);
    }
    let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let mut faces = Vec::new();
    for st in &s.stars {
        for f in &st.faces {
            let ids: Vec<usize> = f
                .iter()
                .map(|&q| {
                    *index.entry(q).or_insert_with(|| {
                        points.push(q);
                        points.len() - 1
                    })
                })
                .collect();
            let mut key = ids.clone();
            key.sort_unstable();
            if seen.insert(key, ()).is_none() {
                faces.push(ids);
            }
        }
    }
    let vertices: Vec<Vec4> = points.iter().map(|&q| s.point(q)).collect();
    let n = s.n();
    let face_weights = faces.iter().map(|f| f.iter().filter(|&&v| v < n).count() as f64 / f.len() as f64).collect();
    // Poles on the side of N, near the identity when the surface is close to H.
    let up = Vec4::new(0.0, 0.0, 0.0, 1.0);
    let poles = faces
        .iter()
        .map(|f| plane_pole(&vertices[f[0]], &vertices[f[1]], &vertices[f[f.len() - 1]], &up))
        .collect::<Result<Vec<_>>>()?;
    let black = (0..points.len()).map(|v| v < n).collect();
    Ok((FaceComplex { space: Space::Hyperbolic, vertices, faces, poles, face_weights, black }, points))
}

/// LEFT or RIGHT projection of a Fuchsian surface: a flippable tiling of a
/// patch of H covering a fundamental domain of the quotient.
pub fn ads_project(s: &FuchsianSurface, side: Handedness) -> Result<(FlippableTiling, ProjectionMap)> {
    let (mut c, _) = star_complex(s)?;
    let ambient = s.group.ambient();
    match project_complex(&c, side, None, ambient.clone()) {
        Err(Error::Geometry(m)) if m.contains("counter-clockwise") => {
            for f in &mut c.faces {
                f.reverse();
            }
            project_complex(&c, side, None, ambient)
        }
        r => r,
    }
}
