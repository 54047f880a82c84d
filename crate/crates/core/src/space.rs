//! Intrinsic geometry of the reference surfaces e* ≅ S² (in S³) and
//! e* ≅ H² (in AdS₃, e = (0,0,0,1)).

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{ads_form, ads_inv, ads_mul, det4, sphere_inv, sphere_mul, Signature, Vec4};

/// Orientation of S² used for left/right labels and counter-clockwise faces.
pub const SPHERE_ORIENT: f64 = 1.0;
/// Orientation of H² used for left/right labels and counter-clockwise faces.
pub const HYPERBOLIC_ORIENT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Sphere,
    Hyperbolic,
}

impl Space {
    pub fn signature(self) -> Signature {
        match self {
            Space::Sphere => Signature::Sphere,
            Space::Hyperbolic => Signature::Ads,
        }
    }

    /// Neutral element e; the surface is e*.
    pub fn identity(self) -> Vec4 {
        match self {
            Space::Sphere => Vec4::new(1.0, 0.0, 0.0, 0.0),
            Space::Hyperbolic => Vec4::new(0.0, 0.0, 0.0, 1.0),
        }
    }

    pub fn curvature(self) -> f64 {
        match self {
            Space::Sphere => 1.0,
            Space::Hyperbolic => -1.0,
        }
    }

    fn orient_sign(self) -> f64 {
        match self {
            Space::Sphere => SPHERE_ORIENT,
            Space::Hyperbolic => HYPERBOLIC_ORIENT,
        }
    }

    pub fn dot(self, u: &Vec4, v: &Vec4) -> f64 {
        match self {
            Space::Sphere => u.dot(v),
            Space::Hyperbolic => ads_form(u, v),
        }
    }

    pub fn mul(self, x: &Vec4, y: &Vec4) -> Vec4 {
        match self {
            Space::Sphere => sphere_mul(x, y),
            Space::Hyperbolic => ads_mul(x, y),
        }
    }

    pub fn inv(self, y: &Vec4) -> Vec4 {
        match self {
            Space::Sphere => sphere_inv(y),
            Space::Hyperbolic => ads_inv(y),
        }
    }

    /// Representative of a surface point: unchanged on S², x3 > 0 on H².
    pub fn canonical(self, p: Vec4) -> Vec4 {
        match self {
            Space::Sphere => p,
            Space::Hyperbolic => {
                if p[2] < 0.0 {
                    -p
                } else {
                    p
                }
            }
        }
    }

    /// Rescale a point back onto the unit quadric.
    pub fn renormalize(self, p: Vec4) -> Vec4 {
        match self {
            Space::Sphere => p / p.norm(),
            Space::Hyperbolic => {
                let q = -ads_form(&p, &p);
                self.canonical(p / q.abs().sqrt())
            }
        }
    }

    pub fn dist(self, p: &Vec4, q: &Vec4) -> f64 {
        match self {
            Space::Sphere => 2.0 * ((p - q).norm() / 2.0).min(1.0).asin(),
            Space::Hyperbolic => {
                let d = p - q;
                2.0 * (ads_form(&d, &d).max(0.0).sqrt() / 2.0).asinh()
            }
        }
    }

    /// Unit tangent at p pointing to q.
    pub fn tangent_toward(self, p: &Vec4, q: &Vec4) -> Result<Vec4> {
        let t = match self {
            Space::Sphere => q - p * p.dot(q),
            Space::Hyperbolic => q + p * ads_form(p, q),
        };
        let n = self.dot(&t, &t);
        if n <= 1e-30 {
            return Err(Error::Degenerate("tangent direction undefined".into()));
        }
        Ok(t / n.sqrt())
    }

    pub fn geodesic(self, p: &Vec4, d: &Vec4, t: f64) -> Vec4 {
        match self {
            Space::Sphere => p * t.cos() + d * t.sin(),
            Space::Hyperbolic => p * t.cosh() + d * t.sinh(),
        }
    }

    pub fn geodesic_tangent(self, p: &Vec4, d: &Vec4, t: f64) -> Vec4 {
        match self {
            Space::Sphere => -p * t.sin() + d * t.cos(),
            Space::Hyperbolic => p * t.sinh() + d * t.cosh(),
        }
    }

    /// Signed parameter of the projection of q onto the geodesic (p, d).
    pub fn param_of(self, p: &Vec4, d: &Vec4, q: &Vec4) -> f64 {
        match self {
            Space::Sphere => q.dot(d).atan2(q.dot(p)),
            Space::Hyperbolic => ads_form(q, d).asinh(),
        }
    }

    /// Distance from q to the geodesic (p, d).
    pub fn dist_to_geodesic(self, p: &Vec4, d: &Vec4, q: &Vec4) -> f64 {
        let n = self.normal_of(p, d);
        match self {
            Space::Sphere => q.dot(&n).clamp(-1.0, 1.0).asin().abs(),
            Space::Hyperbolic => ads_form(q, &n).asinh().abs(),
        }
    }

    /// Unit normal of the geodesic (p, d) pointing to its left side.
    pub fn normal_of(self, p: &Vec4, d: &Vec4) -> Vec4 {
        let e = self.identity();
        let mut n = crate::forms::cross4(&e, p, d) * self.orient_sign();
        if self == Space::Hyperbolic {
            n[2] = -n[2];
            n[3] = -n[3];
        }
        let q = self.dot(&n, &n).abs().sqrt();
        n / q
    }

    /// Positive when (a, b, c) is counter-clockwise; for a point a and two
    /// tangents b, c at a, positive when c is to the left of b.
    pub fn orient(self, a: &Vec4, b: &Vec4, c: &Vec4) -> f64 {
        self.orient_sign() * det4(&self.identity(), a, b, c)
    }

    /// Unsigned angle between unit tangents u, v at p.
    pub fn angle_between(self, p: &Vec4, u: &Vec4, v: &Vec4) -> f64 {
        match self {
            Space::Sphere => 2.0 * (u - v).norm().atan2((u + v).norm()),
            Space::Hyperbolic => det4(&self.identity(), p, u, v).abs().atan2(ads_form(u, v)),
        }
    }

    /// Area of a geodesic polygon from its interior angles.
    pub fn polygon_area(self, angles: &[f64]) -> f64 {
        let n = angles.len() as f64;
        let s: f64 = angles.iter().sum();
        match self {
            Space::Sphere => s - (n - 2.0) * std::f64::consts::PI,
            Space::Hyperbolic => (n - 2.0) * std::f64::consts::PI - s,
        }
    }

    /// Coordinates of a surface point in its 3-space.
    pub fn to3(self, p: &Vec4) -> Vector3<f64> {
        match self {
            Space::Sphere => Vector3::new(p[1], p[2], p[3]),
            Space::Hyperbolic => Vector3::new(p[0], p[1], p[2]),
        }
    }

    pub fn from3(self, v: &Vector3<f64>) -> Vec4 {
        match self {
            Space::Sphere => Vec4::new(0.0, v[0], v[1], v[2]),
            Space::Hyperbolic => Vec4::new(v[0], v[1], v[2], 0.0),
        }
    }
}

/// Euclidean angle between two vectors, accurate near 0 and π.
pub fn euclid_angle(u: &Vec4, v: &Vec4) -> f64 {
    let u = u / u.norm();
    let v = v / v.norm();
    2.0 * (u - v).norm().atan2((u + v).norm())
}
