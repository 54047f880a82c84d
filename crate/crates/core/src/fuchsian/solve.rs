use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DVector, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

use super::group::FuchsianGroup;
use super::hull::{orbit_hull, FuchsianConfig, FuchsianSurface, MAX_WORD_LEN};
use super::pyramid::{curvatures, jacobian};

pub const TOL_SOLVE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// ∞-norm residual at which Newton stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial heights; all 0.5 when absent.
    pub initial: Option<Vec<f64>>,
    pub max_word_len: usize,
    /// Skip the cold-start Newton and go straight to continuation.
    pub force_continuation: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-11, max_iter: 60, initial: None, max_word_len: MAX_WORD_LEN, force_continuation: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub heights: Vec<f64>,
    pub achieved_curvatures: Vec<f64>,
    pub residual: f64,
    pub jacobian_condition: f64,
    pub iterations: usize,
    pub continuation_steps: usize,
    #[serde(skip)]
    pub surface: FuchsianSurface,
}

/// Membership in K(n): every kᵢ < 0 and Σkᵢ > 2πχ.
pub fn check_targets(group: &FuchsianGroup, targets: &[f64]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::Infeasible("no targets".into()));
    }
    if let Some((i, k)) = targets.iter().enumerate().find(|(_, k)| !(**k < 0.0)) {
        return Err(Error::Infeasible(format!("target {i} = {k} is not negative")));
    }
    let sum: f64 = targets.iter().sum();
    let bound = 2.0 * PI * group.euler_characteristic() as f64;
    if !(sum > bound) {
        return Err(Error::Infeasible(format!("sum of targets {sum} is not above 2πχ = {bound}")));
    }
    Ok(())
}

struct Problem<'a> {
    group: &'a FuchsianGroup,
    rays: &'a [Vector3<f64>],
    max_word_len: usize,
}

struct State {
    h: Vec<f64>,
    surface: FuchsianSurface,
    k: Vec<f64>,
}

impl Problem<'_> {
    fn eval(&self, h: &[f64]) -> Result<State> {
        if h.iter().any(|&x| !(x > 0.0 && x < FRAC_PI_2)) {
            return Err(Error::Geometry("height left (0, π/2)".into()));
        }
        let cfg = FuchsianConfig { group: self.group.clone(), rays: self.rays.to_vec(), heights: h.to_vec() };
        let surface = orbit_hull(&cfg, self.max_word_len)?;
        let k = curvatures(&surface)?;
        Ok(State { h: h.to_vec(), surface, k })
    }

    /// Damped Newton towards `target`; Err carries the iteration count on stall.
    fn newton(&self, mut s: State, target: &[f64], tol: f64, max_iter: usize) -> std::result::Result<(State, usize), (State, usize)> {
        let res = |k: &[f64]| k.iter().zip(target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let mut r = res(&s.k);
        for it in 0..max_iter {
            if r <= tol {
                return Ok((s, it));
            }
            let a = match jacobian(&s.surface) {
                Ok(a) => a.entries,
                Err(_) => return Err((s, it)),
            };
            // k = 2π − ω, so ∂k/∂h = −a and the Newton step is a⁻¹(k − k*).
            let rhs = DVector::from_iterator(s.k.len(), s.k.iter().zip(target).map(|(a, b)| a - b));
            let step = match a.lu().solve(&rhs) {
                Some(d) => d,
                None => return Err((s, it)),
            };
            let mut t = 1.0;
            let mut next = None;
            for _ in 0..40 {
                let h: Vec<f64> = s.h.iter().zip(step.iter()).map(|(h, d)| h + t * d).collect();
                if let Ok(ns) = self.eval(&h) {
                    let nr = res(&ns.k);
                    if nr < r {
                        next = Some((ns, nr));
                        break;
                    }
                }
                t *= 0.5;
            }
            match next {
                Some((ns, nr)) => {
                    s = ns;
                    r = nr;
                }
                None => return Err((s, it)),
            }
        }
        if r <= tol {
            Ok((s, max_iter))
        } else {
            Err((s, max_iter))
        }
    }
}

/// Heights whose orbit hull has the prescribed curvatures.
pub fn solve_prescribed_curvature(
    group: &FuchsianGroup,
    rays: &[Vector3<f64>],
    targets: &[f64],
    opts: &SolveOptions,
) -> Result<Solution> {
    check_targets(group, targets)?;
    if rays.len() != targets.len() {
        return Err(Error::Geometry("need one target per ray".into()));
    }
    let pb = Problem { group, rays, max_word_len: opts.max_word_len };
    let h0 = opts.initial.clone().unwrap_or_else(|| vec![0.5; rays.len()]);
    let start = pb.eval(&h0)?;
    let mut iterations = 0;
    let mut steps = 0;
    let solved = if opts.force_continuation {
        None
    } else {
        match pb.newton(start, targets, opts.tol, opts.max_iter) {
            Ok((s, it)) => {
                iterations += it;
                Some(s)
            }
            Err((_, it)) => {
                iterations += it;
                None
            }
        }
    };
    let state = match solved {
        Some(s) => s,
        None => {
            let (s, it, n) = continuation(&pb, &h0, targets, opts)?;
            iterations += it;
            steps = n;
            s
        }
    };
    let residual = state.k.iter().zip(targets).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let jacobian_condition = jacobian(&state.surface)?.condition_number();
    Ok(Solution {
        heights: state.h,
        achieved_curvatures: state.k,
        residual,
        jacobian_condition,
        iterations,
        continuation_steps: steps,
        surface: state.surface,
    })
}

/// Follows k(t) = (1−t)k(h₀) + t k* from t = 0, halving the step on failure.
fn continuation(pb: &Problem, h0: &[f64], targets: &[f64], opts: &SolveOptions) -> Result<(State, usize, usize)> {
    let mut s = pb.eval(h0)?;
    let k0 = s.k.clone();
    let mut t: f64 = 0.0;
    let mut dt: f64 = 0.25;
    let mut iterations = 0;
    let mut steps = 0;
    let mut last_residual = f64::INFINITY;
    while t < 1.0 {
        if dt < 1e-6 {
            return Err(Error::NoConvergence { iterations, residual: last_residual });
        }
        let tn = (t + dt).min(1.0);
        let goal: Vec<f64> = k0.iter().zip(targets).map(|(a, b)| (1.0 - tn) * a + tn * b).collect();
        let tol = if tn == 1.0 { opts.tol } else { opts.tol.max(1e-9) };
        let base = pb.eval(&s.h)?;
        match pb.newton(base, &goal, tol, opts.max_iter) {
            Ok((ns, it)) => {
                iterations += it;
                steps += 1;
                s = ns;
                t = tn;
                dt = (dt * 2.0).min(0.5);
            }
            Err((ns, it)) => {
                iterations += it;
                last_residual = ns.k.iter().zip(&goal).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                dt *= 0.5;
            }
        }
    }
    Ok((s, iterations, steps))
}
