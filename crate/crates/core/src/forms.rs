//! Bilinear forms on R⁴, the quadric models of S³ and AdS₃, their group
//! structure and point/plane duality.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;

/// Quadric membership tolerance after renormalization.
pub const EPS_NORM: f64 = 1e-10;
/// Below this magnitude a coordinate counts as zero for the AdS/Z₂ representative.
pub const EPS_CANON: f64 = 1e-12;
/// Strict hemisphere margin for points of S³₊.
pub const EPS_HEMI: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Signature {
    /// (+,+,+,+)
    Sphere,
    /// (+,+,−,−)
    Ads,
    /// (+,+,+,−)
    Mink31,
    /// (+,−,−) on the first three coordinates.
    Mink21,
}

impl Signature {
    pub fn diag(self) -> [f64; 4] {
        match self {
            Signature::Sphere => [1.0, 1.0, 1.0, 1.0],
            Signature::Ads => [1.0, 1.0, -1.0, -1.0],
            Signature::Mink31 => [1.0, 1.0, 1.0, -1.0],
            Signature::Mink21 => [1.0, -1.0, -1.0, 0.0],
        }
    }

    pub fn matrix(self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vec4::from(self.diag()))
    }
}

pub fn form(u: &Vec4, v: &Vec4, sig: Signature) -> f64 {
    let d = sig.diag();
    d[0] * u[0] * v[0] + d[1] * u[1] * v[1] + d[2] * u[2] * v[2] + d[3] * u[3] * v[3]
}

/// ⟨x,y⟩₂ = x1y1 + x2y2 − x3y3 − x4y4.
#[inline]
pub fn ads_form(u: &Vec4, v: &Vec4) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2] - u[3] * v[3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormClass {
    Plus,
    Minus,
}

impl NormClass {
    pub fn value(self) -> f64 {
        match self {
            NormClass::Plus => 1.0,
            NormClass::Minus => -1.0,
        }
    }
}

/// A point of S³ (norm +1) or AdS₃ (norm −1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadricPoint {
    v: Vec4,
    sig: Signature,
    class: NormClass,
}

impl QuadricPoint {
    /// Point of S³ after renormalization.
    pub fn sphere(v: Vec4) -> Result<Self> {
        Self::normalized(v, Signature::Sphere, NormClass::Plus)
    }

    /// Point of the open hemisphere S³₊ (x1 ≥ 1e−8 after normalization).
    pub fn hemisphere(v: Vec4) -> Result<Self> {
        let p = Self::sphere(v)?;
        if p.v[0] < EPS_HEMI {
            return Err(Error::Geometry(format!(
                "point {:?} is not in the open hemisphere x1 > 0",
                p.v.as_slice()
            )));
        }
        Ok(p)
    }

    /// Point of AdS₃/Z₂ in canonical representative form.
    pub fn ads(v: Vec4) -> Result<Self> {
        let mut p = Self::normalized(v, Signature::Ads, NormClass::Minus)?;
        p.v = canonical_sign(p.v);
        Ok(p)
    }

    /// Unit vector of the given class for `sig`.
    pub fn normalized(v: Vec4, sig: Signature, class: NormClass) -> Result<Self> {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::Geometry("non-finite coordinates".into()));
        }
        let q = form(&v, &v, sig);
        if q.abs() < EPS_CANON {
            return Err(Error::Geometry("light-like or zero vector".into()));
        }
        if q.signum() != class.value() {
            return Err(Error::Geometry(format!(
                "vector has form {q:e}, expected sign {}",
                class.value()
            )));
        }
        let v = v / q.abs().sqrt();
        debug_assert!((form(&v, &v, sig) - class.value()).abs() <= EPS_NORM);
        Ok(QuadricPoint { v, sig, class })
    }

    pub fn v(&self) -> Vec4 {
        self.v
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn class(&self) -> NormClass {
        self.class
    }
}

/// Representative of ±v whose first coordinate above 1e−12 in magnitude is positive.
pub fn canonical_sign(v: Vec4) -> Vec4 {
    for c in v.iter() {
        if c.abs() > EPS_CANON {
            return if *c > 0.0 { v } else { -v };
        }
    }
    v
}

/// The plane x* = {y : ⟨x,y⟩ = 0}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualPlane {
    pub pole: QuadricPoint,
}

impl DualPlane {
    pub fn contains(&self, y: &Vec4, tol: f64) -> bool {
        form(&self.pole.v, y, self.pole.sig).abs() <= tol
    }
}

pub fn dual_of_point(x: &QuadricPoint) -> DualPlane {
    DualPlane { pole: *x }
}

/// The pole of a plane: in S³ the representative in S³₊, in AdS₃ the canonical one.
pub fn dual_of_plane(h: &DualPlane) -> Result<QuadricPoint> {
    match h.pole.sig {
        Signature::Sphere => {
            let v = h.pole.v;
            if v[0].abs() < EPS_HEMI {
                return Err(Error::Geometry("plane passes through e, pole not in S³₊".into()));
            }
            QuadricPoint::hemisphere(if v[0] > 0.0 { v } else { -v })
        }
        Signature::Ads => QuadricPoint::ads(h.pole.v),
        s => Err(Error::Geometry(format!("no duality for signature {s:?}"))),
    }
}

/// Plane with the given (possibly unnormalized) normal vector.
pub fn plane_from_normal(n: Vec4, sig: Signature) -> Result<DualPlane> {
    let class = match sig {
        Signature::Sphere => NormClass::Plus,
        Signature::Ads => {
            if ads_form(&n, &n) > 0.0 {
                NormClass::Plus
            } else {
                NormClass::Minus
            }
        }
        s => return Err(Error::Geometry(format!("no duality for signature {s:?}"))),
    };
    Ok(DualPlane { pole: QuadricPoint::normalized(n, sig, class)? })
}

/// Quaternion product in the SU(2) model of S³.
pub fn sphere_mul(x: &Vec4, y: &Vec4) -> Vec4 {
    Vec4::new(
        x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
        x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
        x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
        x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0],
    )
}

pub fn sphere_inv(y: &Vec4) -> Vec4 {
    Vec4::new(y[0], -y[1], -y[2], -y[3])
}

fn sl2(x: &Vec4) -> [[f64; 2]; 2] {
    [[x[1] + x[3], x[0] + x[2]], [x[0] - x[2], x[3] - x[1]]]
}

fn from_sl2(m: [[f64; 2]; 2]) -> Vec4 {
    Vec4::new(
        0.5 * (m[0][1] + m[1][0]),
        0.5 * (m[0][0] - m[1][1]),
        0.5 * (m[0][1] - m[1][0]),
        0.5 * (m[0][0] + m[1][1]),
    )
}

/// Product in the SL(2,R) model of AdS₃ (as a linear map it is not sign-normalized).
pub fn ads_mul(x: &Vec4, y: &Vec4) -> Vec4 {
    let a = sl2(x);
    let b = sl2(y);
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    from_sl2(m)
}

pub fn ads_inv(y: &Vec4) -> Vec4 {
    Vec4::new(-y[0], -y[1], -y[2], y[3])
}

pub fn identity(sig: Signature) -> Result<QuadricPoint> {
    match sig {
        Signature::Sphere => QuadricPoint::sphere(Vec4::new(1.0, 0.0, 0.0, 0.0)),
        Signature::Ads => QuadricPoint::ads(Vec4::new(0.0, 0.0, 0.0, 1.0)),
        s => Err(Error::Geometry(format!("no group structure for {s:?}"))),
    }
}

pub fn group_mul(x: &QuadricPoint, y: &QuadricPoint) -> Result<QuadricPoint> {
    if x.sig != y.sig {
        return Err(Error::Geometry(format!(
            "signature mismatch: {:?} vs {:?}",
            x.sig, y.sig
        )));
    }
    match x.sig {
        Signature::Sphere => QuadricPoint::sphere(sphere_mul(&x.v, &y.v)),
        Signature::Ads => QuadricPoint::ads(ads_mul(&x.v, &y.v)),
        s => Err(Error::Geometry(format!("no group structure for {s:?}"))),
    }
}

pub fn group_inv(y: &QuadricPoint) -> Result<QuadricPoint> {
    match y.sig {
        Signature::Sphere => QuadricPoint::sphere(sphere_inv(&y.v)),
        Signature::Ads => QuadricPoint::ads(ads_inv(&y.v)),
        s => Err(Error::Geometry(format!("no group structure for {s:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AngleKind {
    Real,
    PureImaginary,
    PiMinusImaginary,
}

/// Angle between two non-light-like vectors of R^{3,1}.
///
/// `sign` is −1 only for a mixed space/time pair with negative product,
/// where the angle is a signed real number; otherwise it is +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HSAngle {
    pub kind: AngleKind,
    pub magnitude: f64,
    pub sign: f64,
}

impl HSAngle {
    /// Complex value of the angle.
    pub fn value(&self) -> Complex64 {
        match self.kind {
            AngleKind::Real => Complex64::new(self.sign * self.magnitude, 0.0),
            AngleKind::PureImaginary => Complex64::new(0.0, self.magnitude),
            AngleKind::PiMinusImaginary => Complex64::new(std::f64::consts::PI, -self.magnitude),
        }
    }
}

/// ‖x‖ as √⟨x,x⟩ with the branch in R₊ ∪ iR₊.
pub fn pseudo_norm(x: &Vec4, sig: Signature) -> Complex64 {
    let q = form(x, x, sig);
    if q >= 0.0 {
        Complex64::new(q.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-q).sqrt())
    }
}

const EPS_LIGHT: f64 = 1e-12;

pub fn hs_angle(u: &Vec4, v: &Vec4) -> Result<HSAngle> {
    let sig = Signature::Mink31;
    let uu = form(u, u, sig);
    let vv = form(v, v, sig);
    let scale = u.norm_squared().max(v.norm_squared()).max(1.0);
    if uu.abs() <= EPS_LIGHT * scale || vv.abs() <= EPS_LIGHT * scale {
        return Err(Error::Geometry("light-like vector in hs_angle".into()));
    }
    let uv = form(u, v, sig);
    let r = uv / (uu.abs().sqrt() * vv.abs().sqrt());
    match (uu > 0.0, vv > 0.0) {
        (false, false) => {
            if u[3] * v[3] < 0.0 {
                return Err(Error::Geometry("time-like vectors on different sheets".into()));
            }
            // cosh θ = ⟨u,v⟩/(‖u‖‖v‖) with ‖u‖‖v‖ = −|u||v|.
            Ok(HSAngle { kind: AngleKind::Real, magnitude: (-r).max(1.0).acosh(), sign: 1.0 })
        }
        (true, true) => {
            let gram = 1.0 - r * r;
            if gram.abs() <= 1e-12 {
                let (un, vn) = (u / u.norm(), v / v.norm());
                if (un - vn).norm() < 1e-9 {
                    return Ok(HSAngle { kind: AngleKind::Real, magnitude: 0.0, sign: 1.0 });
                }
                if (un + vn).norm() < 1e-9 {
                    return Ok(HSAngle { kind: AngleKind::Real, magnitude: std::f64::consts::PI, sign: 1.0 });
                }
                return Err(Error::Geometry("vectors span a light-like plane".into()));
            }
            if gram > 0.0 {
                Ok(HSAngle { kind: AngleKind::Real, magnitude: r.acos(), sign: 1.0 })
            } else if r > 0.0 {
                Ok(HSAngle { kind: AngleKind::PureImaginary, magnitude: r.acosh(), sign: 1.0 })
            } else {
                Ok(HSAngle { kind: AngleKind::PiMinusImaginary, magnitude: (-r).acosh(), sign: 1.0 })
            }
        }
        _ => {
            // sinh θ = i⟨u,v⟩/(‖u‖‖v‖), and the product of norms is i|u||v|.
            let s = r.asinh();
            Ok(HSAngle { kind: AngleKind::Real, magnitude: s.abs(), sign: if s < 0.0 { -1.0 } else { 1.0 } })
        }
    }
}

/// Euclidean determinant of four vectors as columns.
pub fn det4(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    Matrix4::from_columns(&[*a, *b, *c, *d]).determinant()
}

/// Vector n with n·x = det[a,b,c,x] for all x.
pub fn cross4(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let mut n = Vec4::zeros();
    for i in 0..4 {
        let mut e = Vec4::zeros();
        e[i] = 1.0;
        n[i] = det4(a, b, c, &e);
    }
    n
}
