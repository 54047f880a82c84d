//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use flipkit::fuchsian::pyramid::{cone_angles_at, jacobian_terms};
use flipkit::fuchsian::*;
use flipkit::polyhedra::{exterior_dihedral, polar_dual, polar_link, ConvexPolyhedron};
use flipkit::testing::{random_polyhedron, rng};
use flipkit::tilings::{
    black_metric, congruence_error, edge_handedness, flip, project, same_combinatorics, validate_tiling, Color,
    FlippableTiling, Handedness, ProjectionMap,
};
use flipkit::trig::*;
use flipkit::util::{align_frames, cyclic_match, to_dvec};
use flipkit::{Error, Vec4};
use nalgebra::Vector3;
use rand::Rng;

const CORPUS: usize = 100;
const FD_STEP: f64 = 1e-5;
const TRIANGLES: usize = 1000;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Corpus {
    polyhedra: Vec<ConvexPolyhedron>,
    /// LEFT and RIGHT projections of each polyhedron.
    tilings: Vec<[(FlippableTiling, ProjectionMap); 2]>,
    solved: Vec<Solution>,
}

fn polyhedra() -> Vec<ConvexPolyhedron> {
    let mut r = rng(2024);
    let mut out = Vec::with_capacity(CORPUS);
    while out.len() < CORPUS {
        let n = r.gen_range(6..=14);
        let p = random_polyhedron(&mut r, n);
        if (6..=14).contains(&p.vertices.len()) {
            out.push(p);
        }
    }
    out
}

fn c1_duality(c: &Corpus) -> Check {
    let (mut vert, mut edge): (f64, f64) = (0.0, 0.0);
    for (i, p) in c.polyhedra.iter().enumerate() {
        let d = polar_dual(p).map_err(|e| format!("polyhedron {i}: {e}"))?;
        let dd = polar_dual(&d).map_err(|e| format!("polyhedron {i}: {e}"))?;
        ensure!(dd.vertices.len() == p.vertices.len(), "polyhedron {i}: vertex count changed");
        for (a, b) in dd.vertices.iter().zip(&p.vertices) {
            vert = vert.max((a - b).norm());
        }
        ensure!(d.edges.len() == p.edges.len(), "polyhedron {i}: edge count changed");
        for (k, e) in p.edges.iter().enumerate() {
            let [f0, f1] = e.faces;
            ensure!(d.edge_index(f0, f1).is_some(), "polyhedron {i}: faces {f0}, {f1} not adjacent in the dual");
            let chord = (d.vertices[f0] - d.vertices[f1]).norm();
            edge = edge.max((2.0 * (chord / 2.0).asin() - exterior_dihedral(p, k)).abs());
        }
    }
    ensure!(vert <= 1e-9, "double dual vertex error {vert:e}");
    ensure!(edge <= 1e-9, "dual edge vs dihedral error {edge:e}");
    Ok(format!("vertex error {vert:.1e}, edge error {edge:.1e}"))
}

fn c2_projection(c: &Corpus) -> Check {
    let mut area: f64 = 0.0;
    for (i, (p, pair)) in c.polyhedra.iter().zip(&c.tilings).enumerate() {
        for (t, map) in pair {
            let rep = validate_tiling(t);
            ensure!(rep.passed(), "polyhedron {i}: {:?}", rep.violation);
            for f in 0..p.faces.len() {
                let want = p.face_polygon(f).map_err(|e| e.to_string())?.spectrum();
                let got = t.spectrum(map.white_of_face[f]).map_err(|e| e.to_string())?;
                ensure!(cyclic_match(&want, &got, 1e-8), "polyhedron {i}: white face {f} spectrum");
            }
            for v in 0..p.vertices.len() {
                let want = polar_link(p, v).map_err(|e| e.to_string())?.polygon.spectrum();
                let b = map.black_of_vertex[v].ok_or("missing black face")?;
                let got = t.spectrum(b).map_err(|e| e.to_string())?;
                ensure!(cyclic_match(&want, &got, 1e-8), "polyhedron {i}: black face {v} spectrum");
            }
            let total: f64 = (0..t.faces.len()).map(|f| t.face_area(f)).sum::<Result<f64, Error>>().map_err(|e| e.to_string())?;
            area = area.max((total - 4.0 * PI).abs());
        }
    }
    ensure!(area <= 1e-8, "total area off by {area:e}");
    Ok(format!("{} tilings, area error {area:.1e}", 2 * c.tilings.len()))
}

fn c3_flip(c: &Corpus) -> Check {
    let mut worst: f64 = 0.0;
    for (i, pair) in c.tilings.iter().enumerate() {
        let t = &pair[0].0;
        ensure!(t.handedness == Handedness::Right, "polyhedron {i}: LEFT projection is not a RIGHT tiling");
        let f = flip(t).map_err(|e| format!("polyhedron {i}: {e}"))?;
        ensure!(f.handedness == Handedness::Left, "polyhedron {i}: flip kept the handedness");
        ensure!(validate_tiling(&f).passed(), "polyhedron {i}: flipped tiling is invalid");
        for (k, e) in f.edges.iter().enumerate() {
            ensure!(edge_handedness(e, &f.faces) == Some(Handedness::Left), "polyhedron {i}: edge {k} breaks the LEFT rule");
        }
        let ff = flip(&f).map_err(|e| format!("polyhedron {i}: {e}"))?;
        ensure!(same_combinatorics(t, &ff), "polyhedron {i}: flip twice changed the combinatorics");
        let err = congruence_error(t, &ff).ok_or(format!("polyhedron {i}: flip twice is not congruent"))?;
        worst = worst.max(err);
    }
    ensure!(worst <= 1e-7, "flip twice error {worst:e}");
    Ok(format!("{} tilings, round trip error {worst:.1e}", c.tilings.len()))
}

/// Largest mismatch of the isometry of S³ carrying a[i] to b[i].
fn s3_congruence(a: &[Vec4], b: &[Vec4]) -> Option<f64> {
    let all = [0, 1, 2, 3];
    let src: Vec<_> = a.iter().map(|v| to_dvec(v, &all)).collect();
    let dst: Vec<_> = b.iter().map(|v| to_dvec(v, &all)).collect();
    let al = align_frames(&src, &dst, &[1.0; 4])?;
    (al.form_defect < 1e-6).then_some(al.max_error)
}

fn c4_reconstruction(c: &Corpus) -> Check {
    let mut worst: f64 = 0.0;
    for (i, (p, pair)) in c.polyhedra.iter().zip(&c.tilings).enumerate() {
        for (t, map) in pair {
            let w = flipkit::tilings::white_polyhedron(t).map_err(|e| format!("polyhedron {i}: {e}"))?;
            let mine = (0..p.vertices.len())
                .map(|v| map.black_of_vertex[v].map(|b| w.vertices[b]))
                .collect::<Option<Vec<Vec4>>>()
                .ok_or("missing black face")?;
            let err = s3_congruence(&p.vertices, &mine).ok_or(format!("polyhedron {i}: no isometry"))?;
            worst = worst.max(err);
        }
    }
    ensure!(worst <= 1e-8, "reconstruction error {worst:e}");
    Ok(format!("{} reconstructions, error {worst:.1e}", 2 * c.tilings.len()))
}

fn c5_metric_law(c: &Corpus) -> Check {
    let mut worst: f64 = 0.0;
    for (i, (p, pair)) in c.polyhedra.iter().zip(&c.tilings).enumerate() {
        for (t, map) in pair {
            let m = black_metric(t).map_err(|e| format!("polyhedron {i}: {e}"))?;
            ensure!(m.cone_points.len() == p.faces.len(), "polyhedron {i}: wrong number of cone points");
            for cp in &m.cone_points {
                let f = map.white_of_face.iter().position(|&w| w == cp.face).ok_or("unknown white face")?;
                worst = worst.max((cp.angle - (2.0 * PI - p.face_area(f))).abs());
            }
        }
    }
    ensure!(worst <= 1e-8, "cone angle law error {worst:e}");
    Ok(format!("error {worst:.1e}"))
}

fn rel_err(fd: f64, an: f64) -> f64 {
    (fd - an).abs() / an.abs().max(1e-3)
}

fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP)
}

fn sph_sample<R: Rng>(r: &mut R) -> (f64, f64, f64) {
    loop {
        let (a, c, beta) = (r.gen_range(0.1..PI - 0.1), r.gen_range(0.1..PI - 0.1), r.gen_range(0.1..PI - 0.1));
        if let Ok(t) = sph_solve(a, c, beta) {
            if (0.05..=3.0).contains(&t.b) && t.alpha > 0.05 && t.gamma > 0.05 && t.alpha < PI - 0.05 && t.gamma < PI - 0.05 {
                return (a, c, beta);
            }
        }
    }
}

fn ads_sample<R: Rng>(r: &mut R) -> (f64, f64, f64) {
    loop {
        let (a, c, b): (f64, f64, f64) = (r.gen_range(0.1..PI - 0.1), r.gen_range(0.1..PI - 0.1), r.gen_range(0.05..3.0));
        let cb = (b.cosh() - a.cos() * c.cos()) / (a.sin() * c.sin());
        if cb < 1.0 + 1e-6 {
            continue;
        }
        if let Ok(t) = ads_solve(a, c, cb.acosh()) {
            if t.alpha.abs() <= 2.0 && t.gamma.abs() <= 2.0 {
                return (a, c, cb.acosh());
            }
        }
    }
}

fn hs2_sample<R: Rng>(r: &mut R) -> (f64, f64, f64) {
    loop {
        let (b, c, alpha) = (r.gen_range(0.05..3.0), r.gen_range(-1.5..1.5), r.gen_range(0.05..PI - 0.05));
        if let Ok(t) = hs2_laws(b, c, alpha) {
            if t.a > 0.05 && t.a < PI - 0.05 && t.beta.abs() <= 2.0 && t.gamma.abs() <= 2.0 {
                return (b, c, alpha);
            }
        }
    }
}

fn c6_trig(_: &Corpus) -> Check {
    let mut r = rng(66);
    let (mut sph, mut ads, mut hs2): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let fail = |e: Error| e.to_string();
    for _ in 0..TRIANGLES {
        let (a, c, beta) = sph_sample(&mut r);
        let (db_da, dal_da, dal_dc) = sph_partials(a, c, beta).map_err(fail)?;
        sph = sph
            .max(rel_err(central(|x| sph_solve(x, c, beta).unwrap().b, a), db_da))
            .max(rel_err(central(|x| sph_solve(x, c, beta).unwrap().alpha, a), dal_da))
            .max(rel_err(central(|x| sph_solve(a, x, beta).unwrap().alpha, c), dal_dc));
    }
    let mut iso = 0;
    for _ in 0..TRIANGLES {
        let (a, c, beta) = ads_sample(&mut r);
        let (da, dc, _) = ads_partials(a, c, beta).map_err(fail)?;
        ads = ads
            .max(rel_err(central(|x| ads_solve(x, c, beta).unwrap().alpha, a), da))
            .max(rel_err(central(|x| ads_solve(a, x, beta).unwrap().alpha, c), dc));
        if let Ok((_, _, di)) = ads_partials(a, a, beta) {
            ads = ads.max(rel_err(central(|x| ads_solve(x, x, beta).unwrap().alpha, a), di));
            iso += 1;
        }
    }
    for _ in 0..TRIANGLES {
        let (b, c, alpha) = hs2_sample(&mut r);
        let an = hs2_partial_a_b(b, c, alpha).map_err(fail)?;
        hs2 = hs2.max(rel_err(central(|x| hs2_side(x, c, alpha).unwrap(), b), an));
    }
    ensure!(sph <= 1e-6, "spherical partials rel error {sph:e}");
    ensure!(ads <= 1e-6, "AdS partials rel error {ads:e}");
    ensure!(hs2 <= 1e-6, "HS2 partial rel error {hs2:e}");
    Ok(format!("rel errors sph {sph:.1e}, ads {ads:.1e} ({iso} isosceles), hs2 {hs2:.1e}"))
}

fn three_rays() -> Vec<Vector3<f64>> {
    vec![h2_polar(0.3, 0.4), h2_polar(0.8, 2.0), h2_polar(0.6, 4.0)]
}

fn config(rays: Vec<Vector3<f64>>, heights: Vec<f64>) -> FuchsianConfig {
    FuchsianConfig { group: genus2_group(), rays, heights }
}

/// Worst relative mismatch between an assembled matrix and central differences.
fn fd_mismatch(a: &nalgebra::DMatrix<f64>, n: usize, angles: impl Fn(&[f64]) -> Vec<f64>, h: &[f64]) -> f64 {
    let scale = a.amax();
    let mut worst: f64 = 0.0;
    for y in 0..n {
        let (mut hp, mut hm) = (h.to_vec(), h.to_vec());
        hp[y] += FD_STEP;
        hm[y] -= FD_STEP;
        let (p, m) = (angles(&hp), angles(&hm));
        for x in 0..n {
            let fd = (p[x] - m[x]) / (2.0 * FD_STEP);
            worst = worst.max((a[(x, y)] - fd).abs() / a[(x, y)].abs().max(1e-3 * scale));
        }
    }
    worst
}

fn c7_jacobian(_: &Corpus) -> Check {
    let mut r = rng(77);
    let mut instances = vec![
        (vec![h2_polar(0.3, 0.4)], vec![0.3]),
        (vec![h2_polar(0.3, 0.4), h2_polar(0.8, 2.0)], vec![0.3, 0.5]),
        (three_rays(), vec![0.3, 0.5, 0.4]),
        (three_rays(), vec![1.1, 0.9, 1.2]),
    ];
    let mut random = 0;
    while random < 8 {
        let h: Vec<f64> = (0..3).map(|_| r.gen_range(0.15..1.4)).collect();
        if orbit_hull(&config(three_rays(), h.clone()), 10).is_ok() {
            instances.push((three_rays(), h));
            random += 1;
        }
    }
    let (mut ads_fd, mut convex, mut true_cross): (f64, usize, usize) = (0.0, 0, 0);
    for (rays, h) in instances {
        let Ok(s) = orbit_hull(&config(rays, h.clone()), 10) else { continue };
        convex += 1;
        let a = jacobian(&s).map_err(|e| e.to_string())?;
        ads_fd = ads_fd.max(fd_mismatch(&a.entries, s.n(), |hh| cone_angles_at(&s, hh).unwrap(), &h));
        ensure!(a.is_diagonally_dominant(), "AdS jacobian at {h:?} is not diagonally dominant");
        for t in jacobian_terms(&s).map_err(|e| e.to_string())? {
            if t.y != t.x && t.true_edge {
                true_cross += 1;
                ensure!(t.off < 0.0, "AdS term {t:?} is not negative");
            }
        }
    }
    ensure!(convex == 12, "only {convex} of 12 AdS instances are convex");
    let mut sph_fd: f64 = 0.0;
    for _ in 0..10 {
        let n = r.gen_range(6..=12);
        let p = random_polyhedron(&mut r, n);
        let st = SphStar::new(&p).map_err(|e| e.to_string())?;
        let (j, _) = st.jacobian_parts().map_err(|e| e.to_string())?;
        sph_fd = sph_fd.max(fd_mismatch(&j.entries, st.heights.len(), |hh| st.cone_angles_direct(hh), &st.heights));
        for e in &p.edges {
            let [x, y] = e.v;
            ensure!(j.entries[(x, y)] > 0.0 && j.entries[(y, x)] > 0.0, "spherical entry on edge {x}-{y} is not positive");
        }
    }
    ensure!(ads_fd <= 1e-5, "AdS jacobian rel error {ads_fd:e}");
    ensure!(sph_fd <= 1e-5, "spherical star jacobian rel error {sph_fd:e}");
    Ok(format!("{convex} AdS instances ({true_cross} true cross terms) rel {ads_fd:.1e}, 10 spherical stars rel {sph_fd:.1e}"))
}

fn k_single(h: f64) -> f64 {
    let s = orbit_hull(&config(vec![h2_polar(0.3, 0.4)], vec![h]), 10).unwrap();
    2.0 * PI - cone_angles_direct(&s)[0]
}

/// Height with curvature `target` for one orbit, by bisection on the face-angle route.
fn bisect_height(target: f64) -> f64 {
    let (mut lo, mut hi) = (1e-3, FRAC_PI_2 - 1e-3);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if k_single(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn random_targets<R: Rng>(r: &mut R, n: usize) -> Vec<f64> {
    let total = -r.gen_range(0.2..0.85) * 4.0 * PI;
    let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.3..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| total * x / s).collect()
}

fn solve_corpus() -> Result<Vec<Solution>, String> {
    let g = genus2_group();
    let mut r = rng(88);
    let ray_sets = [vec![h2_polar(0.3, 0.4)], vec![h2_polar(0.3, 0.4), h2_polar(0.8, 2.0)], three_rays()];
    let mut out = Vec::new();
    for rays in &ray_sets {
        for _ in 0..3 {
            let k = random_targets(&mut r, rays.len());
            let sol = solve_prescribed_curvature(&g, rays, &k, &SolveOptions::default()).map_err(|e| format!("{k:?}: {e}"))?;
            out.push(sol);
        }
    }
    Ok(out)
}

fn c8_solver(c: &Corpus) -> Check {
    let g = genus2_group();
    let mut residual: f64 = 0.0;
    for sol in &c.solved {
        residual = residual.max(sol.residual);
        let again = curvatures(&orbit_hull(&config(sol.surface.rays.clone(), sol.heights.clone()), 10).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for (a, b) in again.iter().zip(&sol.achieved_curvatures) {
            residual = residual.max((a - b).abs());
        }
    }
    ensure!(residual <= 1e-8, "solver residual {residual:e}");

    let mut oracle: f64 = 0.0;
    for k in [-2.0 * PI, -1.0, -10.0] {
        let sol = solve_prescribed_curvature(&g, &[h2_polar(0.3, 0.4)], &[k], &SolveOptions::default()).map_err(|e| e.to_string())?;
        oracle = oracle.max((sol.heights[0] - bisect_height(k)).abs());
    }
    ensure!(oracle <= 1e-8, "bisection oracle mismatch {oracle:e}");

    let mut r = rng(8);
    let k = [-1.0, -2.5, -3.0];
    let base = solve_prescribed_curvature(&g, &three_rays(), &k, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let (mut starts, mut spread): (usize, f64) = (0, 0.0);
    while starts < 10 {
        let h0: Vec<f64> = (0..3).map(|_| r.gen_range(0.15..1.4)).collect();
        if orbit_hull(&config(three_rays(), h0.clone()), 10).is_err() {
            continue;
        }
        starts += 1;
        let opts = SolveOptions { initial: Some(h0), ..Default::default() };
        let sol = solve_prescribed_curvature(&g, &three_rays(), &k, &opts).map_err(|e| e.to_string())?;
        for (a, b) in sol.heights.iter().zip(&base.heights) {
            spread = spread.max((a - b).abs());
        }
    }
    ensure!(spread <= 1e-6, "restarts disagree by {spread:e}");

    let one = vec![h2_polar(0.3, 0.4)];
    let two = vec![h2_polar(0.3, 0.4), h2_polar(0.8, 2.0)];
    for (rays, k) in [(&one, vec![0.1]), (&one, vec![0.0]), (&one, vec![-4.0 * PI]), (&two, vec![-7.0, -6.0]), (&two, vec![-1.0, 0.5])] {
        let res = solve_prescribed_curvature(&g, rays, &k, &SolveOptions::default());
        ensure!(matches!(res, Err(Error::Infeasible(_))), "targets {k:?} were not rejected");
    }
    Ok(format!(
        "{} solves residual {residual:.1e}, oracle {oracle:.1e}, 10 restarts spread {spread:.1e}, 5 rejections",
        c.solved.len()
    ))
}

fn c9_dual_area(c: &Corpus) -> Check {
    let mut worst: f64 = 0.0;
    for sol in &c.solved {
        let d = minkowski_dual(&sol.surface).map_err(|e| e.to_string())?;
        worst = worst.max(d.area_error(&sol.achieved_curvatures));
        ensure!(d.orthogonality_error(&sol.surface) <= 1e-8, "dual face is not orthogonal to its ray");
    }
    ensure!(worst <= 1e-7, "dual area error {worst:e}");
    Ok(format!("{} surfaces, area error {worst:.1e}", c.solved.len()))
}

fn c10_symmetric(c: &Corpus) -> Check {
    let (mut flips, mut count): (f64, usize) = (0.0, 0);
    for sol in c.solved.iter().filter(|s| s.heights.len() > 1) {
        let s = &sol.surface;
        let (l, ml) = ads_project(s, Handedness::Left).map_err(|e| e.to_string())?;
        let (r, mr) = ads_project(s, Handedness::Right).map_err(|e| e.to_string())?;
        for v in 0..s.n() {
            let a = l.spectrum(ml.black_of_vertex[v].ok_or("missing black face")?).map_err(|e| e.to_string())?;
            let b = r.spectrum(mr.black_of_vertex[v].ok_or("missing black face")?).map_err(|e| e.to_string())?;
            ensure!(a.len() == b.len() && cyclic_match(&a, &b, 1e-7), "black spectra of vertex {v} differ");
        }
        for t in [&l, &r] {
            let f = flip(t).map_err(|e| e.to_string())?;
            ensure!(f.handedness == t.handedness.opposite(), "hyperbolic flip kept the handedness");
            let ff = flip(&f).map_err(|e| e.to_string())?;
            flips = flips.max(congruence_error(t, &ff).ok_or("flip twice is not congruent")?);
            ensure!(t.count(Color::Black) == s.n(), "wrong number of black faces");
        }
        count += 1;
    }
    ensure!(flips <= 1e-7, "hyperbolic flip round trip error {flips:e}");
    Ok(format!("{count} surfaces, flip round trip {flips:.1e}"))
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn(&Corpus) -> Check,
}

fn main() {
    let start = Instant::now();
    let polys = polyhedra();
    let tilings = polys
        .iter()
        .map(|p| [project(p, Handedness::Left).unwrap(), project(p, Handedness::Right).unwrap()])
        .collect();
    let solved = match solve_corpus() {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL setup: solver corpus: {e}");
            std::process::exit(1);
        }
    };
    let corpus = Corpus { polyhedra: polys, tilings, solved };
    println!("setup: {CORPUS} polyhedra, both projections, {} solved surfaces ({:.2} s)", corpus.solved.len(), start.elapsed().as_secs_f64());

    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "duality involution", budget: secs(5), run: c1_duality },
        Criterion { id: 2, name: "projection correspondence", budget: secs(5), run: c2_projection },
        Criterion { id: 3, name: "flip theorem", budget: secs(10), run: c3_flip },
        Criterion { id: 4, name: "reconstruction round trip", budget: secs(10), run: c4_reconstruction },
        Criterion { id: 5, name: "black/white metric law", budget: secs(2), run: c5_metric_law },
        Criterion { id: 6, name: "trig kernels", budget: secs(2), run: c6_trig },
        Criterion { id: 7, name: "jacobian assembly", budget: secs(30), run: c7_jacobian },
        Criterion { id: 8, name: "prescribed curvature solver", budget: secs(60), run: c8_solver },
        Criterion { id: 9, name: "minkowski dual areas", budget: secs(10), run: c9_dual_area },
        Criterion { id: 10, name: "symmetric tiling", budget: secs(30), run: c10_symmetric },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t = Instant::now();
        let res = (c.run)(&corpus);
        let dt = t.elapsed();
        let (ok, detail) = match res {
            Ok(d) if dt <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {} s budget", c.budget.as_secs())),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {:<28} {:>7.2} s  {detail}", c.id, c.name, dt.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
