use std::f64::consts::PI;

use flipkit::forms::{QuadricPoint, Vec4};
use flipkit::polyhedra::*;
use flipkit::testing::{point_at, random_polyhedron, rng};
use flipkit::util::align_frames;
use nalgebra::{DVector, Vector3};
use proptest::prelude::*;

fn tetra_dirs() -> [[f64; 3]; 4] {
    let s = 1.0 / 3f64.sqrt();
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

fn regular_tetrahedron() -> Vec<Vec4> {
    let r: f64 = 0.5;
    tetra_dirs()
        .iter()
        .map(|t| Vec4::new(r.cos(), r.sin() * t[0], r.sin() * t[1], r.sin() * t[2]))
        .collect()
}

/// Unit normal of the hyperplane through three points of R⁴, by Gram–Schmidt
/// against an orthonormal basis of their span.
fn null_normal(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let mut basis: Vec<Vec4> = Vec::new();
    for v in [a, b, c] {
        let mut w = *v;
        for q in &basis {
            w -= q * q.dot(&w);
        }
        basis.push(w / w.norm());
    }
    let mut best = Vec4::zeros();
    for k in 0..4 {
        let mut n = Vec4::zeros();
        n[k] = 1.0;
        for q in &basis {
            n -= q * q.dot(&n);
        }
        if n.norm() > best.norm() {
            best = n;
        }
    }
    best / best.norm()
}

/// Vertices of ∩{y : ⟨x_i, y⟩ ≥ 0} by brute force over triples.
fn halfspace_vertices(xs: &[Vec4]) -> Vec<Vec4> {
    let mut out: Vec<Vec4> = Vec::new();
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = flipkit::forms::cross4(&xs[i], &xs[j], &xs[k]);
                if m.norm() < 1e-10 {
                    continue;
                }
                for y in [m / m.norm(), -m / m.norm()] {
                    if xs.iter().all(|x| x.dot(&y) >= -1e-10) && !out.iter().any(|o| (o - y).norm() < 1e-8) {
                        out.push(y);
                    }
                }
            }
        }
    }
    out
}

/// Spherical triangle area from the solid-angle formula.
fn triangle_area(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let num = a.dot(&b.cross(c)).abs();
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

#[test]
fn tetrahedron_hull() {
    let p = hull_of(&regular_tetrahedron()).unwrap();
    assert_eq!((p.vertices.len(), p.faces.len(), p.edges.len()), (4, 4, 6));
    let d: Vec<f64> = (0..6).map(|e| exterior_dihedral(&p, e)).collect();
    assert!(d.iter().all(|x| (x - d[0]).abs() < 1e-12));
}

#[test]
fn interior_point_is_dropped() {
    let mut pts = regular_tetrahedron();
    let inner = (pts[0] * 0.4 + pts[1] * 0.3 + pts[2] * 0.2 + pts[3] * 0.1).normalize();
    pts.insert(2, inner);
    let p = hull_of(&pts).unwrap();
    assert_eq!(p.vertices.len(), 4);
    for v in &p.vertices {
        assert!((v - inner).norm() > 1e-6);
    }
}

#[test]
fn random_ten_point_euler() {
    let mut r = rng(3);
    let pts: Vec<Vec4> = (0..10).map(|_| point_at(&mut r, 0.9)).collect();
    let p = hull_of(&pts).unwrap();
    assert_eq!(p.vertices.len() as i64 - p.edges.len() as i64 + p.faces.len() as i64, 2);
}

#[test]
fn hull_rejects_bad_input() {
    let pts = regular_tetrahedron();
    assert!(hull_of(&pts[..3]).is_err());
    let flat: Vec<Vec4> = (0..5)
        .map(|k| {
            let t = k as f64;
            Vec4::new(1.0, t.cos() * 0.3, t.sin() * 0.3, 0.0).normalize()
        })
        .collect();
    assert!(hull_of(&flat).is_err());
    let mut boundary = pts.clone();
    boundary.push(Vec4::new(0.0, 1.0, 0.0, 0.0));
    assert!(hull_of(&boundary).is_err());
    assert!(QuadricPoint::hemisphere(Vec4::new(1e-9, 1.0, 0.0, 0.0)).is_err());
}

#[test]
fn tetrahedron_dual_matches_halfspace_oracle() {
    let p = hull_of(&regular_tetrahedron()).unwrap();
    let d = polar_dual(&p).unwrap();
    assert_eq!((d.vertices.len(), d.faces.len()), (4, 4));
    let oracle = halfspace_vertices(&p.vertices);
    assert_eq!(oracle.len(), 4);
    for v in &d.vertices {
        assert!(oracle.iter().any(|o| (o - v).norm() < 1e-9));
    }
    let lens: Vec<f64> = d.edges.iter().map(|e| d.vertices[e.v[0]].dot(&d.vertices[e.v[1]]).acos()).collect();
    assert!(lens.iter().all(|l| (l - lens[0]).abs() < 1e-12));
}

#[test]
fn dual_requires_interior_identity() {
    let far: Vec<Vec4> = regular_tetrahedron()
        .iter()
        .map(|v| {
            let g = Vec4::new(0.55f64.cos(), 0.55f64.sin(), 0.0, 0.0);
            flipkit::forms::sphere_mul(&g, v)
        })
        .collect();
    let p = hull_of(&far).unwrap();
    if p.poles.iter().any(|a| a[0] < flipkit::forms::EPS_HEMI) {
        assert!(polar_dual(&p).is_err());
    }
    let (c, _) = p.centered();
    assert!(polar_dual(&c).is_ok());
}

#[test]
fn random_duals_match_halfspace_oracle() {
    let mut r = rng(5);
    for _ in 0..10 {
        let p = random_polyhedron(&mut r, 8);
        let d = polar_dual(&p).unwrap();
        let oracle = halfspace_vertices(&p.vertices);
        assert_eq!(oracle.len(), d.vertices.len());
        for v in &d.vertices {
            assert!(oracle.iter().any(|o| (o - v).norm() < 1e-8));
        }
    }
}

#[test]
fn triangulation_area_oracle() {
    let mut r = rng(9);
    for _ in 0..50 {
        let p = random_polyhedron(&mut r, 9);
        for f in 0..p.faces.len() {
            let poly = p.face_polygon(f).unwrap();
            let v = &poly.vertices;
            let fan: f64 = (1..v.len() - 1).map(|k| triangle_area(&v[0], &v[k], &v[k + 1])).sum();
            assert!((poly.area() - fan).abs() < EPS_AREA, "{} vs {}", poly.area(), fan);
            assert!((p.face_area(f) - fan).abs() < EPS_AREA);
        }
    }
}

#[test]
fn degree_three_vertex_has_triangle_link() {
    let p = hull_of(&regular_tetrahedron()).unwrap();
    for v in 0..4 {
        assert_eq!(polar_link(&p, v).unwrap().polygon.vertices.len(), 3);
    }
}

fn polyhedron() -> impl Strategy<Value = ConvexPolyhedron> {
    (any::<u64>(), 5usize..12).prop_map(|(seed, n)| random_polyhedron(&mut rng(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn duality_is_an_involution(p in polyhedron()) {
        let d = polar_dual(&p).unwrap();
        let dd = polar_dual(&d).unwrap();
        prop_assert_eq!(dd.vertices.len(), p.vertices.len());
        for (a, b) in dd.vertices.iter().zip(&p.vertices) {
            prop_assert!((a - b).norm() < 1e-9);
        }
        for (f, g) in dd.faces.iter().zip(&p.faces) {
            let (mut f, mut g) = (f.clone(), g.clone());
            f.sort_unstable();
            g.sort_unstable();
            prop_assert_eq!(f, g);
        }
    }

    #[test]
    fn dual_edge_lengths_are_dihedrals(p in polyhedron()) {
        let d = polar_dual(&p).unwrap();
        prop_assert_eq!(d.edges.len(), p.edges.len());
        for (i, e) in p.edges.iter().enumerate() {
            let [f0, f1] = e.faces;
            let len = (d.vertices[f0] - d.vertices[f1]).norm();
            let len = 2.0 * (len / 2.0).asin();
            prop_assert!((len - exterior_dihedral(&p, i)).abs() < 1e-9);
            prop_assert!(d.edge_index(f0, f1).is_some());
        }
    }

    #[test]
    fn link_is_congruent_to_dual_face(p in polyhedron()) {
        let d = polar_dual(&p).unwrap();
        for v in 0..p.vertices.len() {
            let link = polar_link(&p, v).unwrap();
            let face = d.face_polygon(v).unwrap();
            // Link corner k sits at face link.faces[k] of P = vertex of the dual.
            let src: Vec<DVector<f64>> = link.polygon.vertices.iter().map(|x| DVector::from_column_slice(x.as_slice())).collect();
            let dst: Vec<DVector<f64>> = link
                .faces
                .iter()
                .map(|&f| {
                    let k = d.faces[v].iter().position(|&i| i == f).unwrap();
                    DVector::from_column_slice(face.vertices[(face.vertices.len() + k) % face.vertices.len()].as_slice())
                })
                .collect();
            prop_assume!(src.len() >= 3);
            let al = align_frames(&src, &dst, &[1.0, 1.0, 1.0]).unwrap();
            prop_assert!(al.max_error < 1e-9 && al.form_defect < 1e-9, "{:?}", al);
        }
    }

    #[test]
    fn link_lengths_and_angles(p in polyhedron()) {
        for v in 0..p.vertices.len() {
            let link = polar_link(&p, v).unwrap();
            let m = link.faces.len();
            for k in 0..m {
                let f = link.faces[k];
                let g = link.faces[(k + 1) % m];
                let e = p.edges.iter().position(|e| e.v.contains(&v) && e.faces.contains(&f) && e.faces.contains(&g)).unwrap();
                prop_assert!((link.polygon.lengths[k] - exterior_dihedral(&p, e)).abs() < 1e-9);
                let j = p.faces[f].iter().position(|&i| i == v).unwrap();
                prop_assert!((link.polygon.angles[k] - (PI - p.face_angle(f, j))).abs() < 1e-9);
            }
            prop_assert!((link.polygon.area() - (2.0 * PI - p.cone_angle(v))).abs() < EPS_AREA);
        }
    }

    #[test]
    fn gauss_bonnet_total(p in polyhedron()) {
        let faces: f64 = (0..p.faces.len()).map(|f| p.face_area(f)).sum();
        let links: f64 = (0..p.vertices.len()).map(|v| polar_link(&p, v).unwrap().polygon.area()).sum();
        prop_assert!((faces + links - 4.0 * PI).abs() < EPS_AREA);
    }

    #[test]
    fn hull_is_idempotent(p in polyhedron()) {
        let q = hull_of(&p.vertices).unwrap();
        prop_assert_eq!(&q.faces, &p.faces);
        prop_assert_eq!(q.edges.len(), p.edges.len());
    }

    #[test]
    fn dihedral_matches_chart_normals(p in polyhedron()) {
        let c = p.centroid();
        for (i, e) in p.edges.iter().enumerate() {
            let normal = |f: usize| {
                let fv = &p.faces[f];
                let n = null_normal(&p.vertices[fv[0]], &p.vertices[fv[1]], &p.vertices[fv[2]]);
                if n.dot(&c) < 0.0 { -n } else { n }
            };
            let (a, b) = (normal(e.faces[0]), normal(e.faces[1]));
            let oracle = a.dot(&b).clamp(-1.0, 1.0).acos();
            prop_assert!((oracle - exterior_dihedral(&p, i)).abs() < 1e-7);
        }
    }
}
