use flipkit::forms::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Sphere point as the 2×2 complex matrix [[x1+ix2, x3+ix4], [−x3+ix4, x1−ix2]].
fn su2(x: &Vec4) -> [[Complex64; 2]; 2] {
    [[c(x[0], x[1]), c(x[2], x[3])], [c(-x[2], x[3]), c(x[0], -x[1])]]
}

fn matmul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

fn from_su2(m: [[Complex64; 2]; 2]) -> Vec4 {
    Vec4::new(m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im)
}

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Vec4::from)
}

fn sphere_pt() -> impl Strategy<Value = Vec4> {
    vec4().prop_filter("nonzero", |v| v.norm() > 0.1).prop_map(|v| v / v.norm())
}

fn ads_pt() -> impl Strategy<Value = Vec4> {
    vec4()
        .prop_filter("time-like", |v| ads_form(v, v) < -0.05)
        .prop_map(|v| v / (-ads_form(&v, &v)).sqrt())
}

#[test]
fn form_examples() {
    let e1 = Vec4::new(1.0, 0.0, 0.0, 0.0);
    let e4 = Vec4::new(0.0, 0.0, 0.0, 1.0);
    assert_eq!(form(&e1, &e1, Signature::Sphere), 1.0);
    assert_eq!(form(&e4, &e4, Signature::Ads), -1.0);
}

#[test]
fn group_examples() {
    let e = identity(Signature::Sphere).unwrap();
    let y = QuadricPoint::sphere(Vec4::new(0.3, -0.2, 0.5, 0.1)).unwrap();
    assert!((group_mul(&e, &y).unwrap().v() - y.v()).norm() < 1e-15);
    let i = QuadricPoint::sphere(Vec4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
    assert_eq!(group_mul(&i, &i).unwrap().v(), Vec4::new(-1.0, 0.0, 0.0, 0.0));
    assert_eq!(group_inv(&e).unwrap().v(), e.v());
    assert_eq!(group_inv(&i).unwrap().v(), Vec4::new(0.0, -1.0, 0.0, 0.0));

    let ea = identity(Signature::Ads).unwrap();
    assert_eq!(ea.v(), Vec4::new(0.0, 0.0, 0.0, 1.0));
    let ya = QuadricPoint::ads(Vec4::new(0.4, 0.1, 0.3, 1.2)).unwrap();
    assert!((group_mul(&ea, &ya).unwrap().v() - ya.v()).norm() < 1e-15);
    assert_eq!(group_inv(&ea).unwrap().v(), ea.v());
    assert!(group_mul(&e, &ea).is_err());
}

#[test]
fn dual_examples() {
    let e = identity(Signature::Sphere).unwrap();
    let h = dual_of_point(&e);
    assert!(h.contains(&Vec4::new(0.0, 0.3, -0.1, 0.7), 0.0));
    assert!(!h.contains(&Vec4::new(0.1, 0.3, -0.1, 0.7), 1e-3));
    let plane = plane_from_normal(Vec4::new(0.0, 0.0, 0.0, 3.0), Signature::Ads).unwrap();
    assert_eq!(dual_of_plane(&plane).unwrap().v(), Vec4::new(0.0, 0.0, 0.0, 1.0));
    assert!(plane_from_normal(Vec4::new(1.0, 0.0, 1.0, 0.0), Signature::Ads).is_err());
}

#[test]
fn dual_sampling_oracle() {
    let mut rng = flipkit::testing::rng(7);
    use rand::Rng;
    for _ in 0..200 {
        let r = rng.gen_range(0.1..1.4);
        let x = flipkit::testing::point_at(&mut rng, r);
        let x = QuadricPoint::hemisphere(x).unwrap();
        let h = dual_of_point(&x);
        // Rejection sampling: keep random points with tiny form, project onto the plane.
        let mut found = 0;
        while found < 5 {
            let r = rng.gen_range(0.0..3.1);
            let y = flipkit::testing::point_at(&mut rng, r);
            if form(&x.v(), &y, Signature::Sphere).abs() < 0.2 {
                let z = y - x.v() * form(&x.v(), &y, Signature::Sphere);
                let z = z / z.norm();
                assert!(form(&x.v(), &z, Signature::Sphere).abs() <= 1e-12);
                assert!(h.contains(&z, 1e-12));
                found += 1;
            }
        }
        let back = dual_of_plane(&h).unwrap();
        assert!((back.v() - x.v()).norm() < 1e-12);
    }
}

#[test]
fn hs_angle_examples() {
    let t = Vec4::new(0.3, 0.0, 0.2, 1.5);
    let a = hs_angle(&t, &t).unwrap();
    assert_eq!(a.kind, AngleKind::Real);
    assert!(a.magnitude.abs() < 1e-7);
    let a = hs_angle(&Vec4::new(1.0, 0.0, 0.0, 0.0), &Vec4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
    assert_eq!(a.kind, AngleKind::Real);
    assert!((a.magnitude - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    // Two space-like vectors spanning a time-like plane.
    let u = Vec4::new(1.0, 0.0, 0.0, 0.5);
    let v = Vec4::new(1.0, 0.0, 0.0, -0.5);
    assert_eq!(hs_angle(&u, &u).unwrap().kind, AngleKind::Real);
    let w = Vec4::new(1.0, 0.0, 0.0, 0.9);
    assert_eq!(hs_angle(&u, &w).unwrap().kind, AngleKind::PureImaginary);
    assert_eq!(hs_angle(&(-u), &w).unwrap().kind, AngleKind::PiMinusImaginary);
    assert_eq!(hs_angle(&u, &v).unwrap().kind, AngleKind::PureImaginary);
}

proptest! {
    #[test]
    fn form_matches_summation(u in vec4(), v in vec4()) {
        let mut s = 0.0;
        for i in 0..4 {
            let sign = if i < 2 { 1.0 } else { -1.0 };
            s += sign * u[i] * v[i];
        }
        prop_assert!((form(&u, &v, Signature::Ads) - s).abs() < 1e-12);
        prop_assert!((form(&u, &v, Signature::Ads) - form(&v, &u, Signature::Ads)).abs() < 1e-15);
    }

    #[test]
    fn sphere_mul_matches_matrix_product(x in sphere_pt(), y in sphere_pt()) {
        let oracle = from_su2(matmul(su2(&x), su2(&y)));
        prop_assert!((sphere_mul(&x, &y) - oracle).norm() < 1e-12);
    }

    #[test]
    fn inverses(x in sphere_pt(), y in ads_pt()) {
        let e = Vec4::new(1.0, 0.0, 0.0, 0.0);
        prop_assert!((sphere_mul(&x, &sphere_inv(&x)) - e).norm() < EPS_NORM);
        let ea = Vec4::new(0.0, 0.0, 0.0, 1.0);
        prop_assert!((ads_mul(&y, &ads_inv(&y)) - ea).norm() < EPS_NORM);
        prop_assert!((ads_mul(&ads_inv(&y), &y) - ea).norm() < EPS_NORM);
    }

    #[test]
    fn multiplication_is_isometric(g in sphere_pt(), u in sphere_pt(), v in sphere_pt(),
                                   ga in ads_pt(), ua in ads_pt(), va in ads_pt()) {
        let before = form(&(u - v), &(u - v), Signature::Sphere);
        for (a, b) in [(sphere_mul(&g, &u), sphere_mul(&g, &v)), (sphere_mul(&u, &g), sphere_mul(&v, &g))] {
            prop_assert!((form(&(a - b), &(a - b), Signature::Sphere) - before).abs() < 1e-11);
        }
        let before = ads_form(&ua, &va);
        for (a, b) in [(ads_mul(&ga, &ua), ads_mul(&ga, &va)), (ads_mul(&ua, &ga), ads_mul(&va, &ga))] {
            let scale = 1.0 + ga.norm().powi(2) * (ua.norm() + va.norm()).powi(2);
            prop_assert!((ads_form(&a, &b) - before).abs() < 1e-12 * scale);
            prop_assert!((ads_form(&a, &a) + 1.0).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn left_multiplication_maps_dual_planes(x in sphere_pt(), y in sphere_pt(), z0 in sphere_pt()) {
        // z orthogonal to y.
        let z = z0 - y * y.dot(&z0);
        prop_assume!(z.norm() > 0.1);
        let z = z / z.norm();
        prop_assert!(sphere_mul(&x, &z).dot(&sphere_mul(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn inverse_flips_form_on_e_star(x0 in sphere_pt(), y in sphere_pt()) {
        let x = Vec4::new(0.0, x0[1], x0[2], x0[3]);
        prop_assume!(x.norm() > 0.1);
        let x = x / x.norm();
        prop_assert!((x.dot(&y) + x.dot(&sphere_inv(&y))).abs() < 1e-14);
    }

    #[test]
    fn antisym_branches(x in vec4()) {
        let q = form(&x, &x, Signature::Mink31);
        prop_assume!(q.abs() > 1e-3);
        let n1 = pseudo_norm(&x, Signature::Mink31);
        // ⟨,⟩' = −⟨,⟩₁ has the opposite class.
        let np = if q > 0.0 { Complex64::new(0.0, q.sqrt()) } else { Complex64::new((-q).sqrt(), 0.0) };
        let i = Complex64::new(0.0, 1.0);
        if q > 0.0 {
            prop_assert!(n1.im == 0.0 && np.re == 0.0);
            prop_assert!((n1 - (-i) * np).norm() < 1e-12);
        } else {
            prop_assert!(n1.re == 0.0 && np.im == 0.0);
            prop_assert!((n1 - i * np).norm() < 1e-12);
        }
    }

    #[test]
    fn mixed_pair_angle(s in vec4(), t3 in prop::array::uniform3(-1.0f64..1.0), t4 in 1.8f64..3.0) {
        let sig = Signature::Mink31;
        let t = Vec4::new(t3[0], t3[1], t3[2], t4);
        prop_assume!(form(&s, &s, sig) > 0.05);
        let a = hs_angle(&s, &t).unwrap();
        prop_assert_eq!(a.kind, AngleKind::Real);
        let lhs = (a.sign * a.magnitude).sinh();
        let rhs = Complex64::new(0.0, 1.0) * form(&s, &t, sig)
            / (pseudo_norm(&s, sig) * pseudo_norm(&t, sig));
        prop_assert!(rhs.im.abs() < 1e-12);
        prop_assert!((lhs - rhs.re).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn ads_canonical_representative(v in ads_pt()) {
        let p = QuadricPoint::ads(v).unwrap();
        let q = QuadricPoint::ads(-v).unwrap();
        prop_assert_eq!(p.v(), q.v());
        prop_assert!((ads_form(&p.v(), &p.v()) + 1.0).abs() <= EPS_NORM);
    }
}
