use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{ads_form, Vec4};
use crate::trig::{ads_partials, ads_solve, hs2_laws, hs2_side};

use super::group::{h2_dist, mink};
use super::hull::{FuchsianSurface, Neighbor, OrbitPoint};

/// Angle at p between the geodesics of H toward a and b.
pub fn h2_angle(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let t = |q: &Vector3<f64>| q + p * mink(p, q);
    let (u, v) = (t(a), t(b));
    let c = mink(&u, &v) / (mink(&u, &u) * mink(&v, &v)).sqrt();
    c.clamp(-1.0, 1.0).acos()
}

/// Pyramid data at one fundamental vertex x with apex o = −N.
///
/// For neighbor s: `rho_out` = ρ_xs (angle at x in the triangle o x s),
/// `rho_in` = ρ_sx (angle at s), `lengths` = ℓ_xs. For triangle j =
/// (x, s_j, s_{j+1}): `apex` = d (angle at the base point of x between
/// the rays of s_j and s_{j+1}), `wedge` = its share of ω, and `alpha` =
/// the link triangle angles paired with s_j and s_{j+1}.
#[derive(Clone, Debug, Serialize)]
pub struct PyramidStar {
    pub neighbors: Vec<Neighbor>,
    pub rho_out: Vec<f64>,
    pub rho_in: Vec<f64>,
    pub lengths: Vec<f64>,
    pub apex: Vec<f64>,
    pub wedge: Vec<f64>,
    pub alpha: Vec<[f64; 2]>,
    pub cone_angle: f64,
}

fn timelike_len(h: f64) -> f64 {
    h + FRAC_PI_2
}

/// Pyramid data of fundamental vertex i at the given heights.
pub fn pyramid_star(s: &FuchsianSurface, i: usize, heights: &[f64]) -> Result<PyramidStar> {
    let nb = &s.stars[i].neighbors;
    let k = nb.len();
    let p = s.rays[i];
    let hx = heights[i];
    let mut rho_out = Vec::with_capacity(k);
    let mut rho_in = Vec::with_capacity(k);
    let mut lengths = Vec::with_capacity(k);
    for n in nb {
        let q = s.base(n.point);
        let beta = h2_dist(&p, &q);
        let hs = heights[n.point.orbit];
        let t = ads_solve(timelike_len(hs), timelike_len(hx), beta)?;
        rho_out.push(t.alpha);
        rho_in.push(t.gamma);
        lengths.push(t.b);
    }
    let mut apex = Vec::with_capacity(k);
    let mut wedge = Vec::with_capacity(k);
    let mut alpha = Vec::with_capacity(k);
    for j in 0..k {
        let jn = (j + 1) % k;
        let d = h2_angle(&p, &s.base(nb[j].point), &s.base(nb[jn].point));
        if !(d > 0.0 && d < PI) {
            return Err(Error::Degenerate(format!("apex angle {d} at vertex {i}")));
        }
        let t = hs2_laws(rho_out[j], rho_out[jn], d)?;
        apex.push(d);
        wedge.push(t.a);
        // [∂ω/∂ρ_{x s_j}, ∂ω/∂ρ_{x s_{j+1}}] as sinh of these.
        alpha.push([t.gamma, t.beta]);
    }
    let cone_angle = wedge.iter().sum();
    Ok(PyramidStar { neighbors: nb.clone(), rho_out, rho_in, lengths, apex, wedge, alpha, cone_angle })
}

/// Cone angles through the pyramid decomposition.
pub fn cone_angles(s: &FuchsianSurface) -> Result<Vec<f64>> {
    cone_angles_at(s, &s.heights)
}

/// Cone angles of the same triangulated combinatorics at other heights.
pub fn cone_angles_at(s: &FuchsianSurface, heights: &[f64]) -> Result<Vec<f64>> {
    (0..s.n())
        .map(|i| {
            let st = &s.stars[i];
            let k = st.neighbors.len();
            let p = s.rays[i];
            let rho = |q: OrbitPoint| -> Result<f64> {
                let hs = heights[q.orbit];
                Ok(ads_solve(timelike_len(hs), timelike_len(heights[i]), h2_dist(&p, &s.base(q)))?.alpha)
            };
            let mut total = 0.0;
            for j in 0..k {
                let (a, b) = (st.neighbors[j].point, st.neighbors[(j + 1) % k].point);
                let d = h2_angle(&p, &s.base(a), &s.base(b));
                total += hs2_side(rho(a)?, rho(b)?, d)?;
            }
            Ok(total)
        })
        .collect()
}

/// Curvatures k = 2π − ω.
pub fn curvatures(s: &FuchsianSurface) -> Result<Vec<f64>> {
    Ok(cone_angles(s)?.into_iter().map(|w| 2.0 * PI - w).collect())
}

/// Angle at x between the AdS geodesics toward a and b (space-like plane).
pub fn ads_face_angle(x: &Vec4, a: &Vec4, b: &Vec4) -> f64 {
    let t = |q: &Vec4| q + x * ads_form(x, q);
    let (u, v) = (t(a), t(b));
    let c = ads_form(&u, &v) / (ads_form(&u, &u) * ads_form(&v, &v)).sqrt();
    c.clamp(-1.0, 1.0).acos()
}

/// Cone angles summed from the face angles of the untriangulated faces.
pub fn cone_angles_direct(s: &FuchsianSurface) -> Vec<f64> {
    (0..s.n())
        .map(|i| {
            let x = s.point(s.rep(i));
            s.stars[i]
                .faces
                .iter()
                .map(|f| ads_face_angle(&x, &s.point(f[1]), &s.point(f[f.len() - 1])))
                .sum()
        })
        .collect()
}

/// a_xy = ∂ω_x/∂h_y assembled from the pyramid data.
#[derive(Clone, Debug)]
pub struct JacobianMatrix {
    pub entries: DMatrix<f64>,
}

impl JacobianMatrix {
    /// min over columns of |a_xx| − Σ_{y≠x} |a_yx|.
    pub fn dominance_margin(&self) -> f64 {
        let m = &self.entries;
        (0..m.ncols())
            .map(|x| m[(x, x)].abs() - (0..m.nrows()).filter(|&y| y != x).map(|y| m[(y, x)].abs()).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_diagonally_dominant(&self) -> bool {
        self.dominance_margin() > 0.0
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        let sv = self.entries.clone().svd(false, false).singular_values;
        let hi = sv.iter().cloned().fold(0.0, f64::max);
        let lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    }
}

/// One contribution a_xy^j of neighbor j of fundamental vertex x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobianTerm {
    pub x: usize,
    pub neighbor: usize,
    /// Orbit of the neighbor.
    pub y: usize,
    pub true_edge: bool,
    /// Off-diagonal part a_xy^j (zero when y = x).
    pub off: f64,
    /// Diagonal part a_xx^j.
    pub diag: f64,
}

/// Per-neighbor Jacobian contributions.
pub fn jacobian_terms(s: &FuchsianSurface) -> Result<Vec<JacobianTerm>> {
    let mut out = Vec::new();
    for x in 0..s.n() {
        let ps = pyramid_star(s, x, &s.heights)?;
        let k = ps.neighbors.len();
        let p = s.rays[x];
        for j in 0..k {
            let prev = (j + k - 1) % k;
            // ∂ω/∂ρ_{x s_j} from the two triangles sharing the edge x s_j.
            let w = ps.alpha[prev][1].sinh() + ps.alpha[j][0].sinh();
            let q = ps.neighbors[j].point;
            let beta = h2_dist(&p, &s.base(q));
            let (d_far, d_near, d_iso) =
                ads_partials(timelike_len(s.heights[q.orbit]), timelike_len(s.heights[x]), beta)?;
            let term = if q.orbit == x {
                JacobianTerm { x, neighbor: j, y: x, true_edge: ps.neighbors[j].true_edge, off: 0.0, diag: w * d_iso }
            } else {
                JacobianTerm { x, neighbor: j, y: q.orbit, true_edge: ps.neighbors[j].true_edge, off: w * d_far, diag: w * d_near }
            };
            out.push(term);
        }
    }
    Ok(out)
}

/// Jacobian of the cone angles in the heights.
pub fn jacobian(s: &FuchsianSurface) -> Result<JacobianMatrix> {
    let n = s.n();
    let mut a = DMatrix::zeros(n, n);
    for t in jacobian_terms(s)? {
        a[(t.x, t.x)] += t.diag;
        if t.y != t.x {
            a[(t.x, t.y)] += t.off;
        }
    }
    Ok(JacobianMatrix { entries: a })
}
