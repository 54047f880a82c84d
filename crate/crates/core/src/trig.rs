//! Closed-form triangle laws and their partial derivatives.
//!
//! Sides and angles follow the usual labelling: side `a` is opposite angle
//! `alpha`, and so on. Every solver takes two sides and the included angle.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const EPS_LAW: f64 = 1e-10;
pub const EPS_DEG: f64 = 1e-8;
pub const EPS_CVX: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SphTriangle {
    /// Largest residual among the three cosine laws.
    pub fn law_residual(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let r1 = a.cos() - (b.cos() * c.cos() + b.sin() * c.sin() * self.alpha.cos());
        let r2 = b.cos() - (c.cos() * a.cos() + c.sin() * a.sin() * self.beta.cos());
        let r3 = c.cos() - (a.cos() * b.cos() + a.sin() * b.sin() * self.gamma.cos());
        r1.abs().max(r2.abs()).max(r3.abs())
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

fn open_interval(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if !x.is_finite() || x <= lo + EPS_DEG || x >= hi - EPS_DEG {
        return Err(Error::Degenerate(format!("{name} = {x} outside ({lo}, {hi})")));
    }
    Ok(())
}

pub fn sph_solve(a: f64, c: f64, beta: f64) -> Result<SphTriangle> {
    open_interval("a", a, 0.0, PI)?;
    open_interval("c", c, 0.0, PI)?;
    open_interval("beta", beta, 0.0, PI)?;
    let cb = clamp_unit(c.cos() * a.cos() + c.sin() * a.sin() * beta.cos());
    let b = cb.acos();
    let sb = b.sin();
    if sb < EPS_DEG {
        return Err(Error::Degenerate(format!("side b = {b} is degenerate")));
    }
    let alpha = clamp_unit((a.cos() - cb * c.cos()) / (sb * c.sin())).acos();
    let gamma = clamp_unit((c.cos() - a.cos() * cb) / (a.sin() * sb)).acos();
    Ok(SphTriangle { a, b, c, alpha, beta, gamma })
}

/// (∂b/∂a, ∂α/∂a, ∂α/∂c) with b and α functions of (a, c, β).
pub fn sph_partials(a: f64, c: f64, beta: f64) -> Result<(f64, f64, f64)> {
    let t = sph_solve(a, c, beta)?;
    let sb = t.b.sin();
    Ok((t.gamma.cos(), t.gamma.sin() / sb, -t.alpha.sin() * t.b.cos() / sb))
}

/// (∂α̃/∂a, ∂α̃/∂b) with α̃ the angle as a function of the three sides.
pub fn sph_angle_side_partials(t: &SphTriangle) -> (f64, f64) {
    let sb = t.b.sin();
    (1.0 / (sb * t.gamma.sin()), -t.gamma.cos() / (t.gamma.sin() * sb))
}

/// Triangle of de Sitter space with space-like sides a, c, a time-like side
/// of length ib and angles α, iβ, γ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DSTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DSTriangle {
    pub fn law_residual(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let (al, be, ga) = (self.alpha, self.beta, self.gamma);
        let r1 = a.cos() - (b.cosh() * c.cos() + b.sinh() * c.sin() * al.sinh());
        let r2 = b.cosh() - (c.cos() * a.cos() + c.sin() * a.sin() * be.cosh());
        let r3 = c.cos() - (a.cos() * b.cosh() + a.sin() * b.sinh() * ga.sinh());
        r1.abs().max(r2.abs()).max(r3.abs())
    }

    /// Spread of the sine-law ratios sin a/cosh α, sinh b/sinh β, sin c/cosh γ.
    pub fn sine_residual(&self) -> f64 {
        let r = [
            self.a.sin() / self.alpha.cosh(),
            self.b.sinh() / self.beta.sinh(),
            self.c.sin() / self.gamma.cosh(),
        ];
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

pub fn ds_solve(a: f64, c: f64, beta: f64) -> Result<DSTriangle> {
    open_interval("a", a, 0.0, PI)?;
    open_interval("c", c, 0.0, PI)?;
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Degenerate(format!("beta = {beta} must be >= 0")));
    }
    let chb = c.cos() * a.cos() + c.sin() * a.sin() * beta.cosh();
    if chb < 1.0 {
        return Err(Error::Degenerate(format!("cosh b = {chb} < 1")));
    }
    let b = chb.acosh();
    let shb = b.sinh();
    if shb < EPS_DEG {
        return Err(Error::Degenerate(format!("time-like side b = {b} is degenerate")));
    }
    let alpha = ((a.cos() - chb * c.cos()) / (shb * c.sin())).asinh();
    let gamma = ((c.cos() - a.cos() * chb) / (a.sin() * shb)).asinh();
    Ok(DSTriangle { a, b, c, alpha, beta, gamma })
}

/// Triangle of AdS₃ in a time-like plane: time-like sides ia, ic, a
/// space-like side b. It is the de Sitter triangle with α, γ negated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdSTimelikeTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AdSTimelikeTriangle {
    pub fn as_ds(&self) -> DSTriangle {
        DSTriangle {
            a: self.a,
            b: self.b,
            c: self.c,
            alpha: -self.alpha,
            beta: self.beta,
            gamma: -self.gamma,
        }
    }
}

pub fn ads_solve(a: f64, c: f64, beta: f64) -> Result<AdSTimelikeTriangle> {
    let t = ds_solve(a, c, beta)?;
    Ok(AdSTimelikeTriangle {
        a,
        b: t.b,
        c,
        alpha: -t.alpha,
        beta,
        gamma: -t.gamma,
    })
}

/// (∂α/∂a, ∂α/∂c, isosceles ∂α/∂a) at the triangle solved from (a, c, β).
pub fn ads_partials(a: f64, c: f64, beta: f64) -> Result<(f64, f64, f64)> {
    let t = ads_solve(a, c, beta)?;
    if t.b <= EPS_DEG {
        return Err(Error::Degenerate(format!("b = {} too small", t.b)));
    }
    let sb = t.b.sinh();
    let cb = t.b.cosh();
    Ok((
        t.gamma.cosh() / sb,
        -cb * t.alpha.cosh() / sb,
        t.alpha.cosh() * (1.0 - cb) / sb,
    ))
}

/// Triangle of HS² with two de Sitter vertices joined by a space-like side
/// a and a hyperbolic vertex with mixed sides b, c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HS2Triangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl HS2Triangle {
    pub fn law_residual(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let r1 = a.cos() - (-b.sinh() * c.sinh() + b.cosh() * c.cosh() * self.alpha.cos());
        let r2 = b.sinh() - (a.cos() * c.sinh() + a.sin() * c.cosh() * self.beta.sinh());
        let r3 = c.sinh() - (a.cos() * b.sinh() + a.sin() * b.cosh() * self.gamma.sinh());
        r1.abs().max(r2.abs()).max(r3.abs())
    }
}

/// Side a from (b, c, α); a = 0 is allowed.
pub fn hs2_side(b: f64, c: f64, alpha: f64) -> Result<f64> {
    let ca = -b.sinh() * c.sinh() + b.cosh() * c.cosh() * alpha.cos();
    if !ca.is_finite() || ca.abs() > 1.0 + EPS_LAW {
        return Err(Error::Geometry(format!("cos a = {ca} out of range")));
    }
    Ok(clamp_unit(ca).acos())
}

pub fn hs2_laws(b: f64, c: f64, alpha: f64) -> Result<HS2Triangle> {
    let a = hs2_side(b, c, alpha)?;
    let sa = a.sin();
    if sa < EPS_DEG {
        return Err(Error::Degenerate(format!("side a = {a} is degenerate")));
    }
    let beta = ((b.sinh() - a.cos() * c.sinh()) / (sa * c.cosh())).asinh();
    let gamma = ((c.sinh() - a.cos() * b.sinh()) / (sa * b.cosh())).asinh();
    Ok(HS2Triangle { a, b, c, alpha, beta, gamma })
}

/// ∂a/∂b = sinh γ.
pub fn hs2_partial_a_b(b: f64, c: f64, alpha: f64) -> Result<f64> {
    Ok(hs2_laws(b, c, alpha)?.gamma.sinh())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvexityClass {
    Coplanar,
    ConvexSide,
    NotConvexSide,
}

pub fn convexity_sign(alpha1: f64, alpha2: f64) -> ConvexityClass {
    let s = alpha1.sinh() + alpha2.sinh();
    if s.abs() <= EPS_CVX {
        ConvexityClass::Coplanar
    } else if s < 0.0 {
        ConvexityClass::ConvexSide
    } else {
        ConvexityClass::NotConvexSide
    }
}
