use std::f64::consts::PI;

use flipkit::trig::*;
use proptest::prelude::*;
use rand::Rng;

const H: f64 = 1e-5;
const REL: f64 = 1e-6;

fn rel_err(fd: f64, an: f64) -> f64 {
    (fd - an).abs() / an.abs().max(1e-3)
}

fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    (f(x + H) - f(x - H)) / (2.0 * H)
}

/// Random spherical (a, c, β) with b in [0.05, 3].
fn sph_sample<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    loop {
        let a = rng.gen_range(0.1..PI - 0.1);
        let c = rng.gen_range(0.1..PI - 0.1);
        let beta = rng.gen_range(0.1..PI - 0.1);
        if let Ok(t) = sph_solve(a, c, beta) {
            if (0.05..=3.0).contains(&t.b) && t.alpha > 0.05 && t.gamma > 0.05 && t.alpha < PI - 0.05 && t.gamma < PI - 0.05 {
                return (a, c, beta);
            }
        }
    }
}

/// Random AdS (a, c, β) with b in [0.05, 3] and |α|, |γ| ≤ 2.
fn ads_sample<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    loop {
        let a = rng.gen_range(0.1..PI - 0.1);
        let c = rng.gen_range(0.1..PI - 0.1);
        let b: f64 = rng.gen_range(0.05..3.0);
        let cb = (b.cosh() - a.cos() * c.cos()) / (a.sin() * c.sin());
        if cb < 1.0 + 1e-6 {
            continue;
        }
        let beta = cb.acosh();
        if let Ok(t) = ads_solve(a, c, beta) {
            if t.alpha.abs() <= 2.0 && t.gamma.abs() <= 2.0 {
                return (a, c, beta);
            }
        }
    }
}

/// Random HS² (b, c, α) with b in [0.05, 3], a nondegenerate side a and |β|, |γ| ≤ 2.
fn hs2_sample<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    loop {
        let b = rng.gen_range(0.05..3.0);
        let c = rng.gen_range(-1.5..1.5);
        let alpha = rng.gen_range(0.05..PI - 0.05);
        if let Ok(t) = hs2_laws(b, c, alpha) {
            if t.a > 0.05 && t.a < PI - 0.05 && t.beta.abs() <= 2.0 && t.gamma.abs() <= 2.0 {
                return (b, c, alpha);
            }
        }
    }
}

#[test]
fn sph_partials_match_finite_differences() {
    let mut rng = flipkit::testing::rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, c, beta) = sph_sample(&mut rng);
        let (db_da, dal_da, dal_dc) = sph_partials(a, c, beta).unwrap();
        let fd_b = central(|x| sph_solve(x, c, beta).unwrap().b, a);
        let fd_aa = central(|x| sph_solve(x, c, beta).unwrap().alpha, a);
        let fd_ac = central(|x| sph_solve(a, x, beta).unwrap().alpha, c);
        worst = worst.max(rel_err(fd_b, db_da)).max(rel_err(fd_aa, dal_da)).max(rel_err(fd_ac, dal_dc));
    }
    assert!(worst <= REL, "worst relative error {worst:e}");
}

#[test]
fn sph_chain_rule_identity() {
    let mut rng = flipkit::testing::rng(12);
    for _ in 0..200 {
        let (a, c, beta) = sph_sample(&mut rng);
        let t = sph_solve(a, c, beta).unwrap();
        let (db_da, dal_da, _) = sph_partials(a, c, beta).unwrap();
        let (dt_da, dt_db) = sph_angle_side_partials(&t);
        assert!((dal_da - (dt_da + dt_db * db_da)).abs() < 1e-9 * (1.0 + dal_da.abs()));
    }
}

#[test]
fn sph_laws_and_limits() {
    let mut rng = flipkit::testing::rng(13);
    for _ in 0..500 {
        let (a, c, beta) = sph_sample(&mut rng);
        assert!(sph_solve(a, c, beta).unwrap().law_residual() <= EPS_LAW);
    }
    assert!(sph_solve(1e-9, 1.0, 1.0).is_err());
    let t = sph_solve(1e-4, 1.0, 1.0).unwrap();
    assert!((t.b - 1.0).abs() < 1e-4);
}

#[test]
fn ads_partials_match_finite_differences() {
    let mut rng = flipkit::testing::rng(21);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, c, beta) = ads_sample(&mut rng);
        let (da, dc, _) = ads_partials(a, c, beta).unwrap();
        let fd_a = central(|x| ads_solve(x, c, beta).unwrap().alpha, a);
        let fd_c = central(|x| ads_solve(a, x, beta).unwrap().alpha, c);
        worst = worst.max(rel_err(fd_a, da)).max(rel_err(fd_c, dc));
        // Isosceles family: a = c moves together.
        let Ok((_, _, iso)) = ads_partials(a, a, beta) else { continue };
        let fd_iso = central(|x| ads_solve(x, x, beta).unwrap().alpha, a);
        worst = worst.max(rel_err(fd_iso, iso));
    }
    assert!(worst <= REL, "worst relative error {worst:e}");
}

#[test]
fn ads_isosceles_is_sum_and_negative() {
    let mut rng = flipkit::testing::rng(22);
    for _ in 0..300 {
        let (a, _, beta) = ads_sample(&mut rng);
        let Ok((d1, d2, iso)) = ads_partials(a, a, beta) else { continue };
        assert!((iso - (d1 + d2)).abs() < 1e-10 * (1.0 + iso.abs()));
        assert!(iso < 0.0);
    }
}

#[test]
fn ds_laws_and_sine_laws() {
    let mut rng = flipkit::testing::rng(23);
    for _ in 0..500 {
        let (a, c, beta) = ads_sample(&mut rng);
        let t = ds_solve(a, c, beta).unwrap();
        assert!(t.law_residual() <= EPS_LAW);
        assert!(t.sine_residual() <= EPS_LAW);
        let id = t.beta.cosh() - (t.alpha.sinh() * t.gamma.sinh() + t.alpha.cosh() * t.gamma.cosh() * t.b.cosh());
        assert!(id.abs() <= 1e-9 * t.beta.cosh());
        let ads = ads_solve(a, c, beta).unwrap();
        assert_eq!(ads.as_ds().alpha, t.alpha);
    }
}

#[test]
fn hs2_partial_matches_finite_differences() {
    let mut rng = flipkit::testing::rng(31);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (b, c, alpha) = hs2_sample(&mut rng);
        let an = hs2_partial_a_b(b, c, alpha).unwrap();
        let fd = central(|x| hs2_side(x, c, alpha).unwrap(), b);
        worst = worst.max(rel_err(fd, an));
        assert!(hs2_laws(b, c, alpha).unwrap().law_residual() <= EPS_LAW);
    }
    assert!(worst <= REL, "worst relative error {worst:e}");
}

#[test]
fn hs2_out_of_range() {
    assert!(hs2_side(2.0, -2.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn hs2_symmetry(b in 0.05f64..1.5, c in 0.05f64..1.5, alpha in 0.2f64..2.9) {
        let (Ok(t), Ok(s)) = (hs2_laws(b, c, alpha), hs2_laws(c, b, alpha)) else { return Ok(()) };
        prop_assert!((t.a - s.a).abs() < 1e-12);
        prop_assert!((t.beta - s.gamma).abs() < 1e-9);
        prop_assert!((t.gamma - s.beta).abs() < 1e-9);
    }

    #[test]
    fn convexity_sign_is_sum_sign(a1 in -3.0f64..3.0, a2 in -3.0f64..3.0) {
        let s = a1.sinh() + a2.sinh();
        let k = convexity_sign(a1, a2);
        if s.abs() > EPS_CVX {
            prop_assert_eq!(k, if s < 0.0 { ConvexityClass::ConvexSide } else { ConvexityClass::NotConvexSide });
        }
        prop_assert_eq!(convexity_sign(a1, -a1), ConvexityClass::Coplanar);
    }
}
