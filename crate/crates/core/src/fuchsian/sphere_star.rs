use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::Vec4;
use crate::polyhedra::ConvexPolyhedron;
use crate::trig::{sph_partials, sph_solve};

use super::pyramid::JacobianMatrix;

const E: [f64; 4] = [1.0, 0.0, 0.0, 0.0];

/// Ray data of a spherical polyhedron seen from e: unit directions in e*
/// and heights h = d(e, x).
#[derive(Clone, Debug)]
pub struct SphStar {
    pub dirs: Vec<Vec4>,
    pub heights: Vec<f64>,
    pub faces: Vec<[usize; 3]>,
}

impl SphStar {
    pub fn new(p: &ConvexPolyhedron) -> Result<Self> {
        let e = Vec4::from(E);
        if let Some(f) = p.poles.iter().position(|a| !(a.dot(&e) > 0.0)) {
            return Err(Error::Geometry(format!("e is not interior (face {f})")));
        }
        let faces = p
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| match f.as_slice() {
                &[a, b, c] => Ok([a, b, c]),
                _ => Err(Error::Geometry(format!("face {i} is not a triangle"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut dirs = Vec::new();
        let mut heights = Vec::new();
        for x in &p.vertices {
            let h = x[0].clamp(-1.0, 1.0).acos();
            let u = Vec4::new(0.0, x[1], x[2], x[3]);
            dirs.push(u / u.norm());
            heights.push(h);
        }
        Ok(SphStar { dirs, heights, faces })
    }

    pub fn vertex(&self, i: usize, h: f64) -> Vec4 {
        Vec4::from(E) * h.cos() + self.dirs[i] * h.sin()
    }

    /// Angle at u_x on e* between the great circles toward u_y and u_z.
    fn apex(&self, x: usize, y: usize, z: usize) -> f64 {
        let ux = self.dirs[x];
        let t = |q: &Vec4| q - ux * ux.dot(q);
        let (a, b) = (t(&self.dirs[y]), t(&self.dirs[z]));
        (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
    }

    fn beta(&self, x: usize, y: usize) -> f64 {
        self.dirs[x].dot(&self.dirs[y]).clamp(-1.0, 1.0).acos()
    }

    /// Corners (x, y, z) of every face, rotated so each vertex comes first once.
    fn corners(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.faces.iter().flat_map(|&[a, b, c]| [[a, b, c], [b, c, a], [c, a, b]])
    }

    /// Cone angles through the pyramids over the triangles.
    pub fn cone_angles(&self, h: &[f64]) -> Result<Vec<f64>> {
        let mut w = vec![0.0; h.len()];
        for [x, y, z] in self.corners() {
            let rxy = sph_solve(h[y], h[x], self.beta(x, y))?.alpha;
            let rxz = sph_solve(h[z], h[x], self.beta(x, z))?.alpha;
            w[x] += sph_solve(rxy, rxz, self.apex(x, y, z))?.b;
        }
        Ok(w)
    }

    /// Cone angles summed from the face angles at the given heights.
    pub fn cone_angles_direct(&self, h: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; h.len()];
        for [x, y, z] in self.corners() {
            let (vx, vy, vz) = (self.vertex(x, h[x]), self.vertex(y, h[y]), self.vertex(z, h[z]));
            let (a, b) = (vy - vx * vx.dot(&vy), vz - vx * vx.dot(&vz));
            w[x] += (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos();
        }
        w
    }

    /// a_xy = ∂ω_x/∂h_y by the chain rule through the pyramid triangles,
    /// together with the diagonal in the form −Σ cos ℓ_xy a_yx.
    pub fn jacobian_parts(&self) -> Result<(JacobianMatrix, Vec<f64>)> {
        let h = &self.heights;
        let n = h.len();
        let mut a = DMatrix::zeros(n, n);
        let mut cos_len = DMatrix::zeros(n, n);
        for [x, y, z] in self.corners() {
            let ty = sph_solve(h[y], h[x], self.beta(x, y))?;
            let tz = sph_solve(h[z], h[x], self.beta(x, z))?;
            // Link side ω from (ρ_xy, ρ_xz, d): ∂ω/∂ρ_xy = cos γ, ∂ω/∂ρ_xz = cos α.
            let link = sph_solve(ty.alpha, tz.alpha, self.apex(x, y, z))?;
            let (gy, ay) = (link.gamma.cos(), link.alpha.cos());
            let (_, dy_far, dy_near) = sph_partials(h[y], h[x], self.beta(x, y))?;
            let (_, dz_far, dz_near) = sph_partials(h[z], h[x], self.beta(x, z))?;
            a[(x, y)] += gy * dy_far;
            a[(x, z)] += ay * dz_far;
            a[(x, x)] += gy * dy_near + ay * dz_near;
            cos_len[(x, y)] = ty.b.cos();
            cos_len[(x, z)] = tz.b.cos();
        }
        let literal = (0..n)
            .map(|x| -(0..n).filter(|&y| y != x).map(|y| cos_len[(x, y)] * a[(y, x)]).sum::<f64>())
            .collect();
        Ok((JacobianMatrix { entries: a }, literal))
    }
}

/// Jacobian of the cone angles of a spherical polyhedron in the heights of
/// its vertices over e.
pub fn sph_star_jacobian(p: &ConvexPolyhedron) -> Result<JacobianMatrix> {
    Ok(SphStar::new(p)?.jacobian_parts()?.0)
}
