//! The subcommands, as text-in text-out functions.

use std::f64::consts::PI;

use flipkit::fuchsian::{
    ads_project, check_targets, cone_angles, cone_angles_direct, curvatures, fundamental_area, jacobian, minkowski_dual,
    orbit_hull, solve_prescribed_curvature, FuchsianConfig, FuchsianSurface, SolveOptions,
};
use flipkit::fuchsian::hull::MAX_WORD_LEN;
use flipkit::fuchsian::solve::TOL_SOLVE;
use flipkit::polyhedra::{polar_dual, ConvexPolyhedron};
use flipkit::space::Space;
use flipkit::testing::rng;
use flipkit::tilings::{
    black_metric, congruence_error, flip, project, validate_tiling_with, white_polyhedron, Color, FlippableTiling,
    Handedness,
};
use flipkit::tol::Tolerances;
use flipkit::{Error, Result};
use rand::Rng;
use serde::Serialize;

use crate::io::{parse_artifact, parse_fuchsian, parse_polyhedron, parse_tiling, to_json, Artifact, FuchsianFile, PolyhedronFile};
use crate::render::{render_svg, Projection};

/// Double-dual agreement for polyhedra.
pub const TOL_DOUBLE_DUAL: f64 = 1e-9;
/// Dual face area against the prescribed curvature.
pub const TOL_DUAL_AREA: f64 = 1e-7;
/// Agreement of two solves from different starts.
pub const TOL_RESTART: f64 = 1e-6;
/// Agreement of the two cone-angle routes.
pub const TOL_CONE_ROUTES: f64 = 1e-9;
/// Curvature sum against the fundamental area.
pub const TOL_GAUSS_BONNET: f64 = 1e-6;
/// Range of random starting heights.
const RESTART_HEIGHTS: std::ops::Range<f64> = 0.15..1.4;
const RESTART_DRAWS: usize = 1000;

/// Process exit code for an error: 1 i/o, 2 parse, 3 geometry, 4 non-convergence.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        Error::Parse(_) => 2,
        Error::NoConvergence { .. } => 4,
        _ => 3,
    }
}

/// Projection of a polyhedron, or of the orbit hull of a fuchsian.v1 input with heights.
pub fn cmd_project(text: &str, side: Handedness) -> Result<String> {
    let t = match parse_artifact(text)? {
        Artifact::Polyhedron(p) => project(&p.to_polyhedron()?, side)?.0,
        Artifact::Fuchsian(f) => {
            let h = f.heights.clone().ok_or_else(|| Error::Parse("projection needs heights".into()))?;
            ads_project(&evaluate(&f, &h)?.0, side)?.0
        }
        a => return Err(Error::Parse(format!("cannot project {}", a.schema()))),
    };
    to_json(&t)
}

pub fn cmd_flip(text: &str) -> Result<String> {
    to_json(&flip(&parse_tiling(text)?)?)
}

pub fn cmd_dual(text: &str) -> Result<String> {
    let p = polar_dual(&parse_polyhedron(text)?)?;
    to_json(&PolyhedronFile::from_polyhedron(&p))
}

pub fn cmd_reconstruct(text: &str) -> Result<String> {
    let p = white_polyhedron(&parse_tiling(text)?)?;
    to_json(&PolyhedronFile::from_polyhedron(&p))
}

pub fn cmd_render(text: &str, projection: Projection) -> Result<String> {
    render_svg(&parse_tiling(text)?, projection)
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartSummary {
    pub seed: u64,
    pub count: usize,
    pub max_height_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    /// "solve" when targets were given, "evaluate" for fixed heights.
    pub mode: &'static str,
    pub heights: Vec<f64>,
    pub achieved_curvatures: Vec<f64>,
    pub residual: f64,
    pub jacobian_condition: f64,
    pub iterations: usize,
    pub continuation_steps: usize,
    pub word_len: usize,
    pub dual_area_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<RestartSummary>,
}

fn config(f: &FuchsianFile, heights: Vec<f64>) -> Result<FuchsianConfig> {
    Ok(FuchsianConfig { group: f.group()?, rays: f.rays(), heights })
}

fn word_cap(f: &FuchsianFile) -> usize {
    f.word_len_cap.unwrap_or(MAX_WORD_LEN)
}

/// Random starting heights whose orbit hull exists.
fn feasible_start<R: Rng>(f: &FuchsianFile, r: &mut R) -> Result<Vec<f64>> {
    for _ in 0..RESTART_DRAWS {
        let h: Vec<f64> = (0..f.rays.len()).map(|_| r.gen_range(RESTART_HEIGHTS)).collect();
        if orbit_hull(&config(f, h.clone())?, word_cap(f)).is_ok() {
            return Ok(h);
        }
    }
    Err(Error::Geometry("no random start gives a convex orbit hull".into()))
}

fn evaluate(f: &FuchsianFile, heights: &[f64]) -> Result<(FuchsianSurface, Vec<f64>, f64)> {
    if heights.len() != f.rays.len() {
        return Err(Error::Geometry("need one height per ray".into()));
    }
    let s = orbit_hull(&config(f, heights.to_vec())?, word_cap(f))?;
    let k = curvatures(&s)?;
    let cond = jacobian(&s)?.condition_number();
    Ok((s, k, cond))
}

fn solve_report(f: &FuchsianFile, seed: u64, restarts: usize) -> Result<SolveReport> {
    let group = f.group()?;
    let rays = f.rays();
    match (&f.targets, &f.heights) {
        (Some(targets), _) => {
            let opts = SolveOptions {
                initial: f.heights.clone(),
                max_word_len: word_cap(f),
                ..Default::default()
            };
            let sol = solve_prescribed_curvature(&group, &rays, targets, &opts)?;
            let dual = minkowski_dual(&sol.surface)?;
            let restarts = if restarts > 0 {
                let mut r = rng(seed);
                let mut dev: f64 = 0.0;
                for _ in 0..restarts {
                    let h0 = feasible_start(f, &mut r)?;
                    let o = SolveOptions { initial: Some(h0), ..opts.clone() };
                    let other = solve_prescribed_curvature(&group, &rays, targets, &o)?;
                    for (a, b) in other.heights.iter().zip(&sol.heights) {
                        dev = dev.max((a - b).abs());
                    }
                }
                Some(RestartSummary { seed, count: restarts, max_height_deviation: dev })
            } else {
                None
            };
            Ok(SolveReport {
                mode: "solve",
                dual_area_error: dual.area_error(targets),
                heights: sol.heights,
                achieved_curvatures: sol.achieved_curvatures,
                residual: sol.residual,
                jacobian_condition: sol.jacobian_condition,
                iterations: sol.iterations,
                continuation_steps: sol.continuation_steps,
                word_len: sol.surface.word_len,
                restarts,
            })
        }
        (None, Some(heights)) => {
            let (s, k, cond) = evaluate(f, heights)?;
            let dual = minkowski_dual(&s)?;
            Ok(SolveReport {
                mode: "evaluate",
                heights: heights.clone(),
                dual_area_error: dual.area_error(&k),
                achieved_curvatures: k,
                residual: 0.0,
                jacobian_condition: cond,
                iterations: 0,
                continuation_steps: 0,
                word_len: s.word_len,
                restarts: None,
            })
        }
        (None, None) => Err(Error::Parse("fuchsian.v1 input needs targets or heights".into())),
    }
}

pub fn cmd_solve(text: &str, seed: u64, restarts: usize) -> Result<String> {
    to_json(&solve_report(&parse_fuchsian(text)?, seed, restarts)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

#[derive(Default)]
struct Checks(Vec<CheckItem>);

impl Checks {
    fn value(&mut self, name: &str, value: f64, tol: f64) {
        let passed = value.is_finite() && value <= tol;
        self.0.push(CheckItem { name: name.into(), passed, value: Some(value), message: None });
    }

    fn flag(&mut self, name: &str, passed: bool, message: Option<String>) {
        self.0.push(CheckItem { name: name.into(), passed, value: None, message });
    }

    fn error(&mut self, name: &str, e: Error) {
        self.flag(name, false, Some(e.to_string()));
    }
}

fn check_tiling(t: &FlippableTiling, tol: &Tolerances, c: &mut Checks) {
    let report = validate_tiling_with(t, tol);
    c.flag("validate", report.passed(), report.violation.map(|v| v.message));
    match flip(t).and_then(|u| flip(&u)) {
        Ok(tt) => match congruence_error(t, &tt) {
            Some(err) => c.value("flip_round_trip", err, tol.closure),
            None => c.flag("flip_round_trip", false, Some("flipped twice is not congruent".into())),
        },
        Err(e) => c.error("flip_round_trip", e),
    }
    if t.space() == Space::Sphere {
        let black = || -> Result<f64> {
            let m = black_metric(t)?;
            let area = t.faces_of(Color::Black).map(|f| t.face_area(f)).sum::<Result<f64>>()?;
            Ok((area + m.singular_curvatures().iter().sum::<f64>() - 4.0 * PI).abs())
        };
        match black() {
            Ok(v) => c.value("black_gauss_bonnet", v, tol.area),
            Err(e) => c.error("black_gauss_bonnet", e),
        }
        match white_polyhedron(t) {
            Ok(p) => c.flag("reconstruct", p.validate().is_ok(), None),
            Err(e) => c.error("reconstruct", e),
        }
    }
}

fn check_polyhedron(p: &ConvexPolyhedron, tol: &Tolerances, c: &mut Checks) {
    match p.validate() {
        Ok(()) => c.flag("validate", true, None),
        Err(e) => c.error("validate", e),
    }
    match polar_dual(p).and_then(|d| polar_dual(&d)) {
        Ok(dd) => {
            let err = dd.vertices.iter().zip(&p.vertices).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            c.value("double_dual", err, TOL_DOUBLE_DUAL)
        }
        Err(e) => c.error("double_dual", e),
    }
    for (name, side) in [("project_left", Handedness::Left), ("project_right", Handedness::Right)] {
        match project(p, side) {
            Ok((t, _)) => {
                let report = validate_tiling_with(&t, tol);
                c.flag(name, report.passed(), report.violation.map(|v| v.message));
            }
            Err(e) => c.error(name, e),
        }
    }
}

fn check_fuchsian(f: &FuchsianFile, seed: u64, c: &mut Checks) {
    let group = match f.group() {
        Ok(g) => g,
        Err(e) => return c.error("group", e),
    };
    c.value("group_relation", group.relation_residual(), 1e-9);
    let heights = match &f.targets {
        Some(t) => {
            if let Err(e) = check_targets(&group, t) {
                return c.error("targets_feasible", e);
            }
            c.flag("targets_feasible", true, None);
            match solve_report(f, seed, 1) {
                Ok(r) => {
                    c.value("solve_residual", r.residual, TOL_SOLVE);
                    c.value("dual_area", r.dual_area_error, TOL_DUAL_AREA);
                    let dev = r.restarts.map_or(f64::NAN, |s| s.max_height_deviation);
                    c.value("restart_agreement", dev, TOL_RESTART);
                    r.heights
                }
                Err(e) => return c.error("solve", e),
            }
        }
        None => match &f.heights {
            Some(h) => h.clone(),
            None => return c.flag("input", false, Some("needs targets or heights".into())),
        },
    };
    match evaluate(f, &heights) {
        Ok((s, k, _)) => {
            let err = match cone_angles(&s) {
                Ok(a) => a.iter().zip(cone_angles_direct(&s)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
                Err(_) => f64::NAN,
            };
            c.value("cone_angle_routes", err, TOL_CONE_ROUTES);
            let gb = (k.iter().sum::<f64>() - 2.0 * PI * group.euler_characteristic() as f64 - fundamental_area(&s)).abs();
            c.value("gauss_bonnet", gb, TOL_GAUSS_BONNET);
            match jacobian(&s) {
                Ok(j) => c.flag("jacobian_dominance", j.is_diagonally_dominant(), None),
                Err(e) => c.error("jacobian_dominance", e),
            }
            match minkowski_dual(&s) {
                Ok(d) => c.value("double_dual", d.double_dual_error(&s), TOL_DUAL_AREA),
                Err(e) => c.error("double_dual", e),
            }
        }
        Err(e) => c.error("orbit_hull", e),
    }
}

/// Runs the validators and invariant checks that apply to one artifact.
pub fn check_report(text: &str, seed: u64, tol: &Tolerances) -> Result<CheckReport> {
    let artifact = parse_artifact(text)?;
    let mut c = Checks::default();
    match &artifact {
        Artifact::Polyhedron(pf) => match pf.to_polyhedron() {
            Ok(p) => check_polyhedron(&p, tol, &mut c),
            Err(e) => c.error("load", e),
        },
        Artifact::Tiling(t) => check_tiling(t, tol, &mut c),
        Artifact::Fuchsian(f) => check_fuchsian(f, seed, &mut c),
    }
    let passed = c.0.iter().all(|i| i.passed);
    Ok(CheckReport { schema: artifact.schema(), passed, checks: c.0 })
}
